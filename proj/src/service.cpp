#include "leakwarden/service.hpp"

#include <httplib.h>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <cmath>

#include "leakwarden/errors.hpp"
#include "leakwarden/utf8.hpp"

namespace leakwarden {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0, Clock::time_point t1) {
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

std::optional<Label> parse_label(std::string_view s) {
  for (auto l : {Label::Secret, Label::NonSensitive, Label::Unverified})
    if (to_string(l) == s) return l;
  return std::nullopt;
}

nlohmann::json error_body(std::string_view code, std::string_view message) {
  return {{"error", code}, {"message", message}};
}

std::string dump(const nlohmann::json& j) { return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace); }

}  // namespace

std::string mask_secret(std::string_view text) {
  const auto offsets = utf8::char_offsets(text);
  const std::size_t n = offsets.size() - 1;
  const std::size_t head = std::min<std::size_t>(4, n / 4);
  const std::size_t tail = std::min<std::size_t>(2, n / 8);
  std::string out(text.substr(0, offsets[head]));
  out.append(n - head - tail, '*');
  out.append(text.substr(offsets[n - tail]));
  return out;
}

AnalysisRequest parse_analysis_request(std::string_view body) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    // The parser's message quotes input bytes; keep only the position.
    throw BadRequest("malformed JSON near byte " + std::to_string(e.byte));
  }
  if (!j.is_object()) throw BadRequest("request must be a JSON object");
  if (!j.contains("document") || !j["document"].is_string()) throw BadRequest("'document' must be a string");

  AnalysisRequest req;
  req.document = j["document"].get<std::string>();
  if (j.contains("options") && !j["options"].is_null()) {
    const auto& o = j["options"];
    if (!o.is_object()) throw BadRequest("'options' must be an object");
    if (o.contains("threshold") && !o["threshold"].is_null()) {
      if (!o["threshold"].is_number()) throw BadRequest("'threshold' must be a number");
      const double t = o["threshold"].get<double>();
      if (!(t >= 0.0 && t <= 1.0)) throw BadRequest("'threshold' must be in [0, 1]");
      req.options.threshold = t;
    }
    if (o.contains("include_non_sensitive")) {
      if (!o["include_non_sensitive"].is_boolean()) throw BadRequest("'include_non_sensitive' must be a boolean");
      req.options.include_non_sensitive = o["include_non_sensitive"].get<bool>();
    }
  }
  return req;
}

nlohmann::json to_json(const AnalysisRequest& request) {
  nlohmann::json options = {{"include_non_sensitive", request.options.include_non_sensitive}};
  options["threshold"] = request.options.threshold ? nlohmann::json(*request.options.threshold) : nlohmann::json();
  return {{"document", request.document}, {"options", options}};
}

nlohmann::json to_json(const AnalysisResponse& r) {
  nlohmann::json findings = nlohmann::json::array();
  for (const auto& f : r.findings) {
    findings.push_back({{"span_start", f.span_start},
                        {"span_end", f.span_end},
                        {"rule_id", f.rule_id},
                        {"label", to_string(f.label)},
                        {"confidence", f.confidence},
                        {"masked_text", f.masked_text}});
  }
  return {{"findings", findings},
          {"timing",
           {{"extraction_ms", r.timing.extraction_ms},
            {"classification_ms", r.timing.classification_ms},
            {"total_ms", r.timing.total_ms}}},
          {"cache", {{"hits", r.cache_hits}, {"misses", r.cache_misses}}},
          {"classifier_invocations", r.classifier_invocations},
          {"catalog_version", r.catalog_version},
          {"classifier_id", r.classifier_id},
          {"degraded", r.degraded},
          {"warnings", r.warnings}};
}

nlohmann::json to_json(const HealthStatus& h) {
  return {{"status", "ok"},
          {"catalog_version", h.catalog_version},
          {"classifier_id", h.classifier_id},
          {"uptime_s", h.uptime_s},
          {"cache",
           {{"hits", h.cache.hits},
            {"misses", h.cache.misses},
            {"evictions", h.cache.evictions},
            {"size", h.cache.size},
            {"capacity", h.cache.capacity}}}};
}

AnalysisResponse response_from_json(const nlohmann::json& j) {
  AnalysisResponse r;
  for (const auto& f : j.at("findings")) {
    ReportedFinding rf;
    rf.span_start = f.at("span_start").get<std::size_t>();
    rf.span_end = f.at("span_end").get<std::size_t>();
    rf.rule_id = f.at("rule_id").get<std::string>();
    const auto label = parse_label(f.at("label").get<std::string>());
    if (!label) throw std::invalid_argument("unknown label in response");
    rf.label = *label;
    rf.confidence = f.at("confidence").get<double>();
    rf.masked_text = f.at("masked_text").get<std::string>();
    r.findings.push_back(std::move(rf));
  }
  const auto& t = j.at("timing");
  r.timing = {t.at("extraction_ms").get<double>(), t.at("classification_ms").get<double>(),
              t.at("total_ms").get<double>()};
  r.cache_hits = j.at("cache").at("hits").get<std::uint64_t>();
  r.cache_misses = j.at("cache").at("misses").get<std::uint64_t>();
  r.classifier_invocations = j.at("classifier_invocations").get<std::uint64_t>();
  r.catalog_version = j.at("catalog_version").get<std::string>();
  r.classifier_id = j.at("classifier_id").get<std::string>();
  r.degraded = j.at("degraded").get<bool>();
  r.warnings = j.at("warnings").get<std::vector<std::string>>();
  return r;
}

std::shared_ptr<spdlog::logger> default_service_logger() {
  static auto logger = [] {
    auto l = std::make_shared<spdlog::logger>("leakwarden", std::make_shared<spdlog::sinks::stderr_sink_mt>());
    l->set_pattern("%Y-%m-%dT%H:%M:%S.%e %l %v");
    return l;
  }();
  return logger;
}

// ---------------------------------------------------------------------------

Analyzer::Analyzer(std::shared_ptr<const CompiledMatcher> matcher, std::shared_ptr<const Classifier> classifier,
                   AnalyzerConfig config, std::shared_ptr<spdlog::logger> log)
    : matcher_(std::move(matcher)),
      classifier_(std::move(classifier)),
      config_(config),
      log_(log ? std::move(log) : default_service_logger()),
      cache_(config.cache_capacity),
      started_(Clock::now()) {
  if (!matcher_ || !classifier_) throw ContractViolation("Analyzer needs a matcher and a classifier");
}

AnalysisResponse Analyzer::analyze(const AnalysisRequest& request) {
  const auto t0 = Clock::now();
  const double threshold = request.options.threshold.value_or(config_.threshold);
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw BadRequest("threshold must be in [0, 1]");

  AnalysisResponse resp;
  resp.catalog_version = matcher_->catalog_version();
  resp.classifier_id = classifier_->id();

  const auto candidates =
      extract_candidates(request.document, *matcher_, ScanOptions{config_.max_document_bytes});
  const auto t1 = Clock::now();

  std::vector<std::optional<Classification>> labels(candidates.size());
  std::vector<CacheKey> keys;
  keys.reserve(candidates.size());
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    keys.push_back(CacheKey::of(candidates[i], classifier_->id(), threshold));
    labels[i] = cache_.get(keys.back());
    if (labels[i]) {
      ++resp.cache_hits;
    } else {
      ++resp.cache_misses;
      pending.push_back(i);
    }
  }

  if (!pending.empty()) {
    std::vector<ClassifierInput> inputs;
    inputs.reserve(pending.size());
    for (auto i : pending) inputs.push_back(ClassifierInput::of(candidates[i]));
    resp.classifier_invocations = pending.size();
    try {
      const auto scores = classifier_->score(inputs);
      if (scores.size() != inputs.size()) throw ContractViolation("classifier returned a different number of scores");
      for (std::size_t k = 0; k < pending.size(); ++k) {
        auto c = make_classification(scores[k], threshold, classifier_->id());
        cache_.put(keys[pending[k]], c);
        labels[pending[k]] = std::move(c);
      }
    } catch (const ClassifierUnavailable& e) {
      resp.degraded = true;
      resp.warnings.push_back("classifier-unavailable: " + std::string(to_string(e.mode())));
      log_->warn("classifier unavailable ({}); returning unverified candidates", to_string(e.mode()));
    }
  }
  const auto t2 = Clock::now();

  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& c = candidates[i];
    ReportedFinding f{c.span.start, c.span.end, c.rule_id, Label::Unverified, 0.0, mask_secret(c.text)};
    if (!resp.degraded) {
      f.label = labels[i]->label;
      f.confidence = labels[i]->confidence;
      if (f.label != Label::Secret && !request.options.include_non_sensitive) continue;
    }
    log_->debug("finding rule={} span=[{},{}) label={} text={}", f.rule_id, f.span_start, f.span_end,
                to_string(f.label), f.masked_text);
    resp.findings.push_back(std::move(f));
  }
  const auto t3 = Clock::now();

  resp.timing = {ms_since(t0, t1), ms_since(t1, t2), ms_since(t0, t3)};
  log_->info("analyze bytes={} candidates={} findings={} cache_hits={} degraded={} total_ms={:.3f}",
             request.document.size(), candidates.size(), resp.findings.size(), resp.cache_hits, resp.degraded,
             resp.timing.total_ms);
  return resp;
}

HealthStatus Analyzer::health() const {
  return {matcher_->catalog_version(), classifier_->id(), cache_.stats(),
          std::chrono::duration<double>(Clock::now() - started_).count()};
}

// ---------------------------------------------------------------------------

AnalysisService::AnalysisService(ServiceConfig config, std::shared_ptr<const Classifier> classifier,
                                 std::shared_ptr<spdlog::logger> log)
    : config_(std::move(config)), log_(log ? std::move(log) : default_service_logger()) {
  std::shared_ptr<const CompiledMatcher> matcher;
  try {
    matcher = std::make_shared<const CompiledMatcher>(compile_catalog(load_catalog_file(config_.catalog_path)));
  } catch (const CatalogError& e) {
    throw StartupError("cannot load catalog " + config_.catalog_path.string() + ": " + e.what());
  }
  if (!classifier) {
    try {
      classifier = make_classifier(config_.classifier);
    } catch (const std::invalid_argument& e) {
      throw StartupError(std::string("invalid classifier configuration: ") + e.what());
    }
  }
  analyzer_ = std::make_unique<Analyzer>(
      std::move(matcher), std::move(classifier),
      AnalyzerConfig{config_.classifier.threshold, config_.cache_capacity, config_.max_document_bytes}, log_);
  server_ = std::make_unique<httplib::Server>();
  install_routes();
}

AnalysisService::~AnalysisService() { stop(); }

void AnalysisService::install_routes() {
  const std::size_t workers = std::max<std::size_t>(1, config_.worker_threads);
  server_->new_task_queue = [workers] { return new httplib::ThreadPool(workers); };
  // JSON escaping can inflate a document up to 6x.
  server_->set_payload_max_length(config_.max_document_bytes * 6 + 65536);

  server_->Post("/analyze", [this](const httplib::Request& req, httplib::Response& res) {
    try {
      const auto request = parse_analysis_request(req.body);
      res.set_content(dump(to_json(analyzer_->analyze(request))), "application/json");
    } catch (const BadRequest& e) {
      res.status = 400;
      res.set_content(dump(error_body("bad-request", e.what())), "application/json");
    } catch (const DocumentTooLarge& e) {
      res.status = 413;
      res.set_content(dump(error_body("document-too-large", e.what())), "application/json");
    } catch (const std::exception& e) {
      log_->error("analyze failed: {}", e.what());
      res.status = 500;
      res.set_content(dump(error_body("internal", "analysis failed")), "application/json");
    }
  });

  server_->Get("/health", [this](const httplib::Request&, httplib::Response& res) {
    res.set_content(dump(to_json(analyzer_->health())), "application/json");
  });

  server_->set_logger([this](const httplib::Request& req, const httplib::Response& res) {
    log_->info("{} {} -> {}", req.method, req.path, res.status);
  });
}

int AnalysisService::bind() {
  if (config_.port == 0) {
    port_ = server_->bind_to_any_port(config_.bind_address);
  } else {
    port_ = server_->bind_to_port(config_.bind_address, config_.port) ? config_.port : -1;
  }
  if (port_ < 0)
    throw StartupError("cannot bind " + config_.bind_address + ":" + std::to_string(config_.port));
  log_->info("listening on {}:{} catalog={} classifier={}", config_.bind_address, port_,
             analyzer_->health().catalog_version, analyzer_->classifier().id());
  return port_;
}

void AnalysisService::run() { server_->listen_after_bind(); }

void AnalysisService::stop() {
  if (server_) server_->stop();
}

}  // namespace leakwarden
