#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "leakwarden/catalog.hpp"
#include "leakwarden/classify.hpp"
#include "leakwarden/scan.hpp"

namespace leakwarden {

struct Annotation {
  ByteSpan span;
  Label label = Label::Secret;  // Secret or NonSensitive
};

struct LabeledDocument {
  std::string id;
  std::string text;
  std::vector<Annotation> annotations;
};

struct LabeledCorpus {
  std::vector<LabeledDocument> documents;
};

// JSON corpus format, see docs/corpus-format.md. Throws std::invalid_argument
// for schema errors and ContractViolation for spans outside their document.
LabeledCorpus parse_corpus(std::string_view json);
LabeledCorpus load_corpus_file(const std::filesystem::path& path);
std::string serialize_corpus(const LabeledCorpus& corpus);

struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  ConfusionCounts& operator+=(const ConfusionCounts& o) noexcept {
    tp += o.tp, fp += o.fp, fn += o.fn, tn += o.tn;
    return *this;
  }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

struct Metrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Span-equality matching. Predictions are compared as a set of spans, so two
// rules firing on one span count once.
//   tp: predicted spans equal to a Secret annotation
//   fp: predicted spans equal to no Secret annotation
//   fn: Secret annotations with no predicted span
//   tn: NonSensitive annotations with no predicted span
// Throws ContractViolation for spans outside [0, document_size] or a span
// annotated with both labels.
ConfusionCounts match_predictions(std::span<const ByteSpan> predicted, std::span<const Annotation> annotations,
                                  std::size_t document_size);

// 2PR / (P + R), 0 when P + R = 0.
double f1_score(double precision, double recall) noexcept;

// precision = tp / (tp + fp), recall = tp / (tp + fn); an empty denominator
// yields 1.0 (no predictions means no false alarms; no positives means
// nothing was missed).
Metrics precision_recall_f1(const ConfusionCounts& counts) noexcept;

// Unweighted mean of each field. Throws ContractViolation for an empty list.
Metrics macro_average(std::span<const Metrics> per_class);

struct ClassReport {
  ConfusionCounts counts;
  Metrics secret;
  Metrics non_sensitive;  // same counts with the roles of the classes swapped
  Metrics macro;
};

ClassReport class_report(const ConfusionCounts& counts);

struct EvalReport {
  ClassReport regex_only;  // every candidate reported as Secret
  ClassReport pipeline;    // candidates the classifier labels Secret
  std::size_t documents = 0;
  std::size_t candidates = 0;
  std::size_t secret_annotations = 0;
  std::size_t non_sensitive_annotations = 0;
  std::vector<std::string> warnings;
};

EvalReport evaluate_pipeline(const LabeledCorpus& corpus, const CompiledMatcher& matcher,
                             const Classifier& classifier, double threshold);

nlohmann::json to_json(const EvalReport& report);
std::string format_text(const EvalReport& report);

struct LatencySample {
  double extraction_ms = 0.0;
  double classification_ms = 0.0;
  double total_ms = 0.0;       // server-reported
  double round_trip_ms = 0.0;  // measured by the client
  std::uint64_t classifier_invocations = 0;
};

struct LatencyAggregate {
  double mean = 0.0;
  double p50 = 0.0;
  double p95 = 0.0;
};

// Nearest-rank percentiles. Throws ContractViolation for no samples.
LatencyAggregate aggregate(std::span<const double> values);

struct LatencyReport {
  std::vector<LatencySample> samples;
  LatencyAggregate total;
  LatencyAggregate round_trip;
  LatencyAggregate classification;
};

LatencyReport summarize(std::vector<LatencySample> samples);

// Posts every document `repetitions` times in a row to `target`
// (http://host:port), sequentially. Throws std::runtime_error when the
// service is unreachable or answers with an error.
LatencyReport measure_latency(std::span<const std::string> documents, const std::string& target,
                              std::size_t repetitions);

nlohmann::json to_json(const LatencyReport& report);

}  // namespace leakwarden
