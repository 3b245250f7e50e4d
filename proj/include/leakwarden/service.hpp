#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "leakwarden/catalog.hpp"
#include "leakwarden/classify.hpp"
#include "leakwarden/result_cache.hpp"
#include "leakwarden/scan.hpp"

namespace spdlog {
class logger;
}

namespace httplib {
class Server;
}

namespace leakwarden {

struct AnalysisOptions {
  std::optional<double> threshold;
  bool include_non_sensitive = false;
};

struct AnalysisRequest {
  std::string document;
  AnalysisOptions options;
};

struct ReportedFinding {
  std::size_t span_start = 0;
  std::size_t span_end = 0;
  std::string rule_id;
  Label label = Label::Secret;
  double confidence = 0.0;
  std::string masked_text;

  friend bool operator==(const ReportedFinding&, const ReportedFinding&) = default;
};

struct StageTiming {
  double extraction_ms = 0.0;
  double classification_ms = 0.0;
  double total_ms = 0.0;
};

struct AnalysisResponse {
  std::vector<ReportedFinding> findings;
  StageTiming timing;
  std::uint64_t cache_hits = 0;
  std::uint64_t cache_misses = 0;
  // Candidates actually sent to the classifier for this request.
  std::uint64_t classifier_invocations = 0;
  std::string catalog_version;
  std::string classifier_id;
  bool degraded = false;
  std::vector<std::string> warnings;
};

struct HealthStatus {
  std::string catalog_version;
  std::string classifier_id;
  CacheStats cache;
  double uptime_s = 0.0;
};

class BadRequest : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Wire encoding; field names are documented in docs/analyze.schema.json.
AnalysisRequest parse_analysis_request(std::string_view body);
nlohmann::json to_json(const AnalysisRequest& request);
nlohmann::json to_json(const AnalysisResponse& response);
nlohmann::json to_json(const HealthStatus& health);
AnalysisResponse response_from_json(const nlohmann::json& j);

// Reveals at most the first 4 and last 2 characters; shorter matches reveal
// proportionally less.
std::string mask_secret(std::string_view text);

struct AnalyzerConfig {
  double threshold = 0.5;
  std::size_t cache_capacity = ResultCache::kDefaultCapacity;
  std::size_t max_document_bytes = std::size_t{1} << 20;
};

// extract -> classify (through the cache) -> filter. Safe to call from many
// threads at once.
class Analyzer {
 public:
  Analyzer(std::shared_ptr<const CompiledMatcher> matcher, std::shared_ptr<const Classifier> classifier,
           AnalyzerConfig config, std::shared_ptr<spdlog::logger> log = nullptr);

  // Throws DocumentTooLarge and BadRequest. A classifier outage yields a
  // degraded response instead of an error.
  AnalysisResponse analyze(const AnalysisRequest& request);
  HealthStatus health() const;

  const CompiledMatcher& matcher() const noexcept { return *matcher_; }
  const Classifier& classifier() const noexcept { return *classifier_; }
  const AnalyzerConfig& config() const noexcept { return config_; }

 private:
  std::shared_ptr<const CompiledMatcher> matcher_;
  std::shared_ptr<const Classifier> classifier_;
  AnalyzerConfig config_;
  std::shared_ptr<spdlog::logger> log_;
  ResultCache cache_;
  std::chrono::steady_clock::time_point started_;
};

struct ServiceConfig {
  std::string bind_address = "127.0.0.1";
  int port = 8765;  // 0 picks a free port
  std::filesystem::path catalog_path;
  ClassifierSpec classifier;
  std::size_t cache_capacity = ResultCache::kDefaultCapacity;
  std::size_t max_document_bytes = std::size_t{1} << 20;
  std::size_t worker_threads = 8;
};

class StartupError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Local HTTP front end: POST /analyze, GET /health.
class AnalysisService {
 public:
  // Loads and compiles the catalog. `classifier` overrides config.classifier
  // when set. Throws StartupError.
  explicit AnalysisService(ServiceConfig config, std::shared_ptr<const Classifier> classifier = nullptr,
                           std::shared_ptr<spdlog::logger> log = nullptr);
  ~AnalysisService();
  AnalysisService(const AnalysisService&) = delete;
  AnalysisService& operator=(const AnalysisService&) = delete;

  // Returns the bound port. Throws StartupError.
  int bind();
  // Serves until stop(); call bind() first.
  void run();
  void stop();

  Analyzer& analyzer() noexcept { return *analyzer_; }
  int port() const noexcept { return port_; }

 private:
  void install_routes();

  ServiceConfig config_;
  std::shared_ptr<spdlog::logger> log_;
  std::unique_ptr<Analyzer> analyzer_;
  std::unique_ptr<httplib::Server> server_;
  int port_ = -1;
};

// Logger used by the service when none is supplied (stderr).
std::shared_ptr<spdlog::logger> default_service_logger();

}  // namespace leakwarden
