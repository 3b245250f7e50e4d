#include "leakwarden/evaluation.hpp"

#include <httplib.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "leakwarden/errors.hpp"
#include "leakwarden/service.hpp"

namespace leakwarden {

LabeledCorpus parse_corpus(std::string_view json) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("corpus is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("documents") || !j["documents"].is_array())
    throw std::invalid_argument("corpus must be an object with a 'documents' array");

  LabeledCorpus corpus;
  for (const auto& d : j["documents"]) {
    LabeledDocument doc;
    doc.id = d.value("id", std::to_string(corpus.documents.size()));
    if (!d.contains("text") || !d["text"].is_string()) throw std::invalid_argument("document " + doc.id + ": missing text");
    doc.text = d["text"].get<std::string>();
    for (const auto& a : d.value("annotations", nlohmann::json::array())) {
      Annotation ann;
      ann.span = {a.at("start").get<std::size_t>(), a.at("end").get<std::size_t>()};
      const auto label = a.at("label").get<std::string>();
      if (label == "Secret") {
        ann.label = Label::Secret;
      } else if (label == "NonSensitive") {
        ann.label = Label::NonSensitive;
      } else {
        throw std::invalid_argument("document " + doc.id + ": label must be Secret or NonSensitive");
      }
      if (ann.span.start >= ann.span.end || ann.span.end > doc.text.size())
        throw ContractViolation("document " + doc.id + ": annotation span out of range");
      doc.annotations.push_back(ann);
    }
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

LabeledCorpus load_corpus_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read corpus " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_corpus(ss.str());
}

std::string serialize_corpus(const LabeledCorpus& corpus) {
  nlohmann::json docs = nlohmann::json::array();
  for (const auto& d : corpus.documents) {
    nlohmann::json anns = nlohmann::json::array();
    for (const auto& a : d.annotations)
      anns.push_back({{"start", a.span.start}, {"end", a.span.end}, {"label", to_string(a.label)}});
    docs.push_back({{"id", d.id}, {"text", d.text}, {"annotations", anns}});
  }
  return nlohmann::json{{"format", 1}, {"documents", docs}}.dump(1) + "\n";
}

ConfusionCounts match_predictions(std::span<const ByteSpan> predicted, std::span<const Annotation> annotations,
                                  std::size_t document_size) {
  auto check = [&](const ByteSpan& s) {
    if (s.start >= s.end || s.end > document_size)
      throw ContractViolation("match_predictions: span [" + std::to_string(s.start) + ", " + std::to_string(s.end) +
                              ") invalid for document of " + std::to_string(document_size) + " bytes");
  };
  std::set<ByteSpan> found;
  for (const auto& p : predicted) {
    check(p);
    found.insert(p);
  }
  std::set<ByteSpan> secret;
  std::set<ByteSpan> benign;
  for (const auto& a : annotations) {
    check(a.span);
    (a.label == Label::Secret ? secret : benign).insert(a.span);
  }
  for (const auto& s : secret)
    if (benign.count(s) != 0) throw ContractViolation("match_predictions: span annotated with both labels");

  ConfusionCounts c;
  for (const auto& f : found) (secret.count(f) != 0 ? c.tp : c.fp)++;
  for (const auto& s : secret)
    if (found.count(s) == 0) ++c.fn;
  for (const auto& b : benign)
    if (found.count(b) == 0) ++c.tn;
  return c;
}

double f1_score(double precision, double recall) noexcept {
  const double sum = precision + recall;
  return sum > 0.0 ? 2.0 * precision * recall / sum : 0.0;
}

Metrics precision_recall_f1(const ConfusionCounts& c) noexcept {
  const auto ratio = [](std::uint64_t num, std::uint64_t den) {
    return den == 0 ? 1.0 : static_cast<double>(num) / static_cast<double>(den);
  };
  Metrics m;
  m.precision = ratio(c.tp, c.tp + c.fp);
  m.recall = ratio(c.tp, c.tp + c.fn);
  m.f1 = f1_score(m.precision, m.recall);
  return m;
}

Metrics macro_average(std::span<const Metrics> per_class) {
  if (per_class.empty()) throw ContractViolation("macro_average: no classes");
  Metrics m;
  for (const auto& c : per_class) {
    m.precision += c.precision;
    m.recall += c.recall;
    m.f1 += c.f1;
  }
  const auto n = static_cast<double>(per_class.size());
  m.precision /= n;
  m.recall /= n;
  m.f1 /= n;
  return m;
}

ClassReport class_report(const ConfusionCounts& counts) {
  ClassReport r;
  r.counts = counts;
  r.secret = precision_recall_f1(counts);
  r.non_sensitive = precision_recall_f1({counts.tn, counts.fn, counts.fp, counts.tp});
  const std::array<Metrics, 2> both{r.secret, r.non_sensitive};
  r.macro = macro_average(both);
  return r;
}

EvalReport evaluate_pipeline(const LabeledCorpus& corpus, const CompiledMatcher& matcher,
                             const Classifier& classifier, double threshold) {
  EvalReport report;
  report.documents = corpus.documents.size();

  std::vector<std::string> texts;
  texts.reserve(corpus.documents.size());
  for (const auto& d : corpus.documents) texts.push_back(d.text);
  const auto candidates = extract_batch(texts, matcher);

  ConfusionCounts regex_counts;
  ConfusionCounts pipeline_counts;
  for (std::size_t i = 0; i < corpus.documents.size(); ++i) {
    const auto& doc = corpus.documents[i];
    const auto& cands = candidates[i];
    report.candidates += cands.size();

    std::vector<ByteSpan> all;
    for (const auto& c : cands) all.push_back(c.span);

    const auto labels = classify_batch(cands, classifier, threshold);
    std::vector<ByteSpan> kept;
    for (const auto& f : filter_findings(cands, labels)) kept.push_back(f.candidate.span);

    regex_counts += match_predictions(all, doc.annotations, doc.text.size());
    pipeline_counts += match_predictions(kept, doc.annotations, doc.text.size());

    const std::set<ByteSpan> matched(all.begin(), all.end());
    for (const auto& a : doc.annotations) {
      (a.label == Label::Secret ? report.secret_annotations : report.non_sensitive_annotations)++;
      if (a.label == Label::Secret && matched.count(a.span) == 0) {
        report.warnings.push_back("document " + doc.id + ": Secret annotation [" + std::to_string(a.span.start) +
                                  ", " + std::to_string(a.span.end) + ") is not matched by any rule");
      }
    }
  }
  report.regex_only = class_report(regex_counts);
  report.pipeline = class_report(pipeline_counts);
  return report;
}

namespace {

nlohmann::json metrics_json(const Metrics& m) {
  return {{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}};
}

nlohmann::json class_json(const ClassReport& r) {
  return {{"counts", {{"tp", r.counts.tp}, {"fp", r.counts.fp}, {"fn", r.counts.fn}, {"tn", r.counts.tn}}},
          {"secret", metrics_json(r.secret)},
          {"non_sensitive", metrics_json(r.non_sensitive)},
          {"macro", metrics_json(r.macro)}};
}

nlohmann::json aggregate_json(const LatencyAggregate& a) { return {{"mean", a.mean}, {"p50", a.p50}, {"p95", a.p95}}; }

}  // namespace

nlohmann::json to_json(const EvalReport& report) {
  return {{"documents", report.documents},
          {"candidates", report.candidates},
          {"secret_annotations", report.secret_annotations},
          {"non_sensitive_annotations", report.non_sensitive_annotations},
          {"matching", "span-equality"},
          {"regex_only", class_json(report.regex_only)},
          {"pipeline", class_json(report.pipeline)},
          {"warnings", report.warnings}};
}

std::string format_text(const EvalReport& report) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(2);
  out << "documents " << report.documents << ", candidates " << report.candidates << " (" << report.secret_annotations
      << " Secret / " << report.non_sensitive_annotations << " NonSensitive annotated), span-level matching\n\n";
  out << "pipeline     class          precision  recall     f1\n";
  auto block = [&](std::string_view name, const ClassReport& r) {
    auto row = [&](std::string_view label, std::string_view cls, const Metrics& m) {
      std::string left(label);
      left.resize(13, ' ');
      std::string mid(cls);
      mid.resize(15, ' ');
      out << left << mid << 100.0 * m.precision << "%     " << 100.0 * m.recall << "%     " << 100.0 * m.f1
          << "%\n";
    };
    row(name, "Secret", r.secret);
    row("", "NonSensitive", r.non_sensitive);
    row("", "macro", r.macro);
    out << "             counts tp=" << r.counts.tp << " fp=" << r.counts.fp << " fn=" << r.counts.fn
        << " tn=" << r.counts.tn << "\n";
  };
  block("regex-only", report.regex_only);
  block("classified", report.pipeline);
  for (const auto& w : report.warnings) out << "warning: " << w << "\n";
  return out.str();
}

LatencyAggregate aggregate(std::span<const double> values) {
  if (values.empty()) throw ContractViolation("aggregate: no samples");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  auto rank = [&](double p) {
    const auto k = static_cast<std::size_t>(std::ceil(p * static_cast<double>(sorted.size())));
    return sorted[std::max<std::size_t>(k, 1) - 1];
  };
  LatencyAggregate a;
  a.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(sorted.size());
  a.p50 = rank(0.50);
  a.p95 = rank(0.95);
  return a;
}

LatencyReport summarize(std::vector<LatencySample> samples) {
  LatencyReport r;
  r.samples = std::move(samples);
  if (r.samples.empty()) return r;
  std::vector<double> total, rtt, cls;
  for (const auto& s : r.samples) {
    total.push_back(s.total_ms);
    rtt.push_back(s.round_trip_ms);
    cls.push_back(s.classification_ms);
  }
  r.total = aggregate(total);
  r.round_trip = aggregate(rtt);
  r.classification = aggregate(cls);
  return r;
}

LatencyReport measure_latency(std::span<const std::string> documents, const std::string& target,
                              std::size_t repetitions) {
  httplib::Client client(target);
  client.set_keep_alive(true);
  client.set_read_timeout(30, 0);

  std::vector<LatencySample> samples;
  samples.reserve(documents.size() * repetitions);
  for (const auto& doc : documents) {
    const std::string body = to_json(AnalysisRequest{doc, {}}).dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
    for (std::size_t rep = 0; rep < repetitions; ++rep) {
      const auto t0 = std::chrono::steady_clock::now();
      const auto res = client.Post("/analyze", body, "application/json");
      const auto t1 = std::chrono::steady_clock::now();
      if (!res) throw std::runtime_error("service unreachable at " + target + ": " + httplib::to_string(res.error()));
      if (res->status != 200) throw std::runtime_error("service answered " + std::to_string(res->status));
      const auto resp = response_from_json(nlohmann::json::parse(res->body));
      samples.push_back({resp.timing.extraction_ms, resp.timing.classification_ms, resp.timing.total_ms,
                         std::chrono::duration<double, std::milli>(t1 - t0).count(), resp.classifier_invocations});
    }
  }
  return summarize(std::move(samples));
}

nlohmann::json to_json(const LatencyReport& report) {
  nlohmann::json samples = nlohmann::json::array();
  for (const auto& s : report.samples) {
    samples.push_back({{"extraction_ms", s.extraction_ms},
                       {"classification_ms", s.classification_ms},
                       {"total_ms", s.total_ms},
                       {"round_trip_ms", s.round_trip_ms},
                       {"classifier_invocations", s.classifier_invocations}});
  }
  return {{"count", report.samples.size()},
          {"total_ms", aggregate_json(report.total)},
          {"round_trip_ms", aggregate_json(report.round_trip)},
          {"classification_ms", aggregate_json(report.classification)},
          {"samples", samples}};
}

}  // namespace leakwarden
