#include <CLI11.hpp>
#include <httplib.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <pthread.h>
#include <sstream>
#include <thread>

#include "leakwarden/errors.hpp"
#include "leakwarden/evaluation.hpp"
#include "leakwarden/service.hpp"
#include "leakwarden/utf8.hpp"

namespace fs = std::filesystem;
using namespace leakwarden;

namespace {

enum class Format { Text, Json };

struct Common {
  std::string catalog = LEAKWARDEN_DEFAULT_CATALOG;
  std::string classifier = "heuristic";
  std::string endpoint;
  double threshold = 0.5;
  int timeout_ms = 2000;
  std::size_t cache_capacity = ResultCache::kDefaultCapacity;
  std::size_t max_document_bytes = std::size_t{1} << 20;
  std::string format = "text";
  std::string log_level;

  Format fmt() const { return format == "json" ? Format::Json : Format::Text; }

  ClassifierSpec spec() const {
    ClassifierSpec s;
    s.kind = classifier == "remote" ? ClassifierSpec::Kind::Remote : ClassifierSpec::Kind::Heuristic;
    s.endpoint = endpoint;
    s.threshold = threshold;
    s.timeout = std::chrono::milliseconds(timeout_ms);
    return s;
  }

  ServiceConfig service(int port, std::string bind) const {
    ServiceConfig c;
    c.bind_address = std::move(bind);
    c.port = port;
    c.catalog_path = catalog;
    c.classifier = spec();
    c.cache_capacity = cache_capacity;
    c.max_document_bytes = max_document_bytes;
    return c;
  }

  std::shared_ptr<spdlog::logger> logger(spdlog::level::level_enum fallback) const {
    auto log = default_service_logger();
    log->set_level(log_level.empty() ? fallback : spdlog::level::from_str(log_level));
    return log;
  }
};

void add_common(CLI::App& cmd, Common& c, bool with_format) {
  cmd.add_option("--catalog", c.catalog, "Rule catalog (YAML)")->envname("LEAKWARDEN_CATALOG");
  cmd.add_option("--classifier", c.classifier, "Classifier backend")
      ->check(CLI::IsMember({"heuristic", "remote"}))
      ->envname("LEAKWARDEN_CLASSIFIER");
  cmd.add_option("--endpoint", c.endpoint, "Remote classifier URL (http://host:port/path)")
      ->envname("LEAKWARDEN_ENDPOINT");
  cmd.add_option("--threshold", c.threshold, "Secret threshold")
      ->check(CLI::Range(0.0, 1.0))
      ->envname("LEAKWARDEN_THRESHOLD");
  cmd.add_option("--timeout-ms", c.timeout_ms, "Remote classifier timeout")
      ->check(CLI::PositiveNumber)
      ->envname("LEAKWARDEN_TIMEOUT_MS");
  cmd.add_option("--cache-capacity", c.cache_capacity, "Result cache entries")->envname("LEAKWARDEN_CACHE_CAPACITY");
  cmd.add_option("--max-document-bytes", c.max_document_bytes, "Largest accepted document")
      ->check(CLI::PositiveNumber)
      ->envname("LEAKWARDEN_MAX_DOCUMENT_BYTES");
  cmd.add_option("--log-level", c.log_level, "trace, debug, info, warn, error or off")
      ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "critical", "off"}))
      ->envname("LEAKWARDEN_LOG_LEVEL");
  if (with_format) {
    cmd.add_option("--format", c.format, "Report format")
        ->check(CLI::IsMember({"text", "json"}))
        ->envname("LEAKWARDEN_FORMAT");
  }
}

// ---------------------------------------------------------------------------
// serve

int cmd_serve(const Common& common, int port, const std::string& bind) {
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  std::unique_ptr<AnalysisService> service;
  try {
    service = std::make_unique<AnalysisService>(common.service(port, bind), nullptr,
                                                common.logger(spdlog::level::info));
    service->bind();
  } catch (const StartupError& e) {
    std::cerr << "leakwarden: " << e.what() << "\n";
    return 2;
  }

  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    default_service_logger()->info("received signal {}, shutting down", sig);
    service->stop();
  });
  service->run();
  if (waiter.joinable()) {
    pthread_kill(waiter.native_handle(), SIGTERM);
    waiter.join();
  }
  return 0;
}

// ---------------------------------------------------------------------------
// scan

struct FileReport {
  std::string path;
  std::string text;
  std::optional<AnalysisResponse> response;
  std::string error;
};

std::pair<std::size_t, std::size_t> line_and_column(std::string_view text, std::size_t offset) {
  const auto head = text.substr(0, offset);
  const auto nl = head.rfind('\n');
  const std::size_t line = 1 + static_cast<std::size_t>(std::count(head.begin(), head.end(), '\n'));
  const auto line_start = nl == std::string_view::npos ? 0 : nl + 1;
  return {line, 1 + utf8::count_chars(head.substr(line_start))};
}

std::vector<std::string> expand(const std::vector<std::string>& paths, std::vector<FileReport>& errors) {
  std::vector<std::string> files;
  for (const auto& p : paths) {
    std::error_code ec;
    if (fs::is_directory(p, ec)) {
      std::vector<std::string> found;
      for (auto it = fs::recursive_directory_iterator(p, ec); !ec && it != fs::recursive_directory_iterator();
           it.increment(ec)) {
        if (it->is_regular_file(ec)) found.push_back(it->path().string());
      }
      if (ec) errors.push_back({p, "", std::nullopt, ec.message()});
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.push_back(p);
    }
  }
  return files;
}

std::optional<std::string> read_file(const std::string& path, std::string& error) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) {
    error = fs::exists(path, ec) ? "not a regular file" : "no such file";
    return std::nullopt;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    error = "cannot open";
    return std::nullopt;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cmd_scan(const Common& common, const std::vector<std::string>& paths) {
  std::shared_ptr<const CompiledMatcher> matcher;
  std::shared_ptr<const Classifier> classifier;
  try {
    matcher = std::make_shared<const CompiledMatcher>(compile_catalog(load_catalog_file(common.catalog)));
    classifier = make_classifier(common.spec());
  } catch (const std::exception& e) {
    std::cerr << "leakwarden: " << e.what() << "\n";
    return 2;
  }
  Analyzer analyzer(matcher, classifier,
                    AnalyzerConfig{common.threshold, common.cache_capacity, common.max_document_bytes},
                    common.logger(spdlog::level::warn));

  std::vector<FileReport> reports;
  for (const auto& file : expand(paths, reports)) {
    FileReport r{file, "", std::nullopt, ""};
    if (auto text = read_file(file, r.error)) {
      r.text = std::move(*text);
      try {
        r.response = analyzer.analyze({r.text, {}});
      } catch (const std::exception& e) {
        r.error = e.what();
      }
    }
    reports.push_back(std::move(r));
  }

  std::size_t findings = 0;
  std::size_t errors = 0;
  std::size_t scanned = 0;
  bool degraded = false;
  for (const auto& r : reports) {
    if (r.response) {
      ++scanned;
      findings += r.response->findings.size();
      degraded = degraded || r.response->degraded;
    } else {
      ++errors;
    }
  }

  if (common.fmt() == Format::Json) {
    nlohmann::json files = nlohmann::json::array();
    for (const auto& r : reports) {
      nlohmann::json entry = {{"path", r.path}};
      if (r.response) {
        auto body = to_json(*r.response);
        for (auto& f : body["findings"]) {
          const auto [line, col] = line_and_column(r.text, f["span_start"].get<std::size_t>());
          f["line"] = line;
          f["column"] = col;
        }
        entry["findings"] = body["findings"];
        entry["degraded"] = body["degraded"];
        entry["warnings"] = body["warnings"];
      } else {
        entry["error"] = r.error;
      }
      files.push_back(entry);
    }
    const nlohmann::json out = {
        {"catalog_version", matcher->catalog_version()},
        {"classifier_id", classifier->id()},
        {"files", files},
        {"summary", {{"files", reports.size()}, {"scanned", scanned}, {"findings", findings}, {"errors", errors}}}};
    std::cout << out.dump(2, ' ', false, nlohmann::json::error_handler_t::replace) << "\n";
  } else {
    for (const auto& r : reports) {
      if (!r.response) {
        std::cout << r.path << ": error: " << r.error << "\n";
        continue;
      }
      for (const auto& f : r.response->findings) {
        const auto [line, col] = line_and_column(r.text, f.span_start);
        std::cout << r.path << ":" << line << ":" << col << ": " << to_string(f.label) << " " << f.rule_id << " "
                  << f.masked_text << " (confidence " << fmt::format("{:.2f}", f.confidence) << ")\n";
      }
    }
    std::cout << reports.size() << " file(s), " << scanned << " scanned, " << findings << " finding(s), " << errors
              << " error(s)" << (degraded ? ", classifier unavailable (findings unverified)" : "") << "\n";
  }
  if (errors > 0) return 2;
  return findings > 0 ? 1 : 0;
}

// ---------------------------------------------------------------------------
// eval

int cmd_eval(const Common& common, const std::string& corpus_path) {
  try {
    const auto corpus = load_corpus_file(corpus_path);
    const auto matcher = compile_catalog(load_catalog_file(common.catalog));
    const auto classifier = make_classifier(common.spec());
    const auto report = evaluate_pipeline(corpus, matcher, *classifier, common.threshold);
    if (common.fmt() == Format::Json) {
      auto j = to_json(report);
      j["corpus"] = corpus_path;
      j["catalog_version"] = matcher.catalog_version();
      j["classifier_id"] = classifier->id();
      j["threshold"] = common.threshold;
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << "corpus " << corpus_path << "\nclassifier " << classifier->id() << " threshold " << common.threshold
                << "\n\n"
                << format_text(report);
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "leakwarden: " << e.what() << "\n";
    return 2;
  }
}

// ---------------------------------------------------------------------------
// bench

std::string latency_text(const LatencyReport& r) {
  std::string out = fmt::format("{} samples\n{:<16}{:>10}{:>10}{:>10}\n", r.samples.size(), "ms", "mean", "p50", "p95");
  auto row = [&](std::string_view name, const LatencyAggregate& a) {
    out += fmt::format("{:<16}{:>10.3f}{:>10.3f}{:>10.3f}\n", name, a.mean, a.p50, a.p95);
  };
  row("total", r.total);
  row("classification", r.classification);
  row("round trip", r.round_trip);
  return out;
}

int cmd_bench(const Common& common, const std::string& corpus_path, std::size_t repetitions, std::string target) {
  try {
    std::vector<std::string> documents;
    for (auto& d : load_corpus_file(corpus_path).documents) documents.push_back(std::move(d.text));

    std::unique_ptr<AnalysisService> local;
    std::thread runner;
    if (target.empty()) {
      local = std::make_unique<AnalysisService>(common.service(0, "127.0.0.1"), nullptr,
                                                common.logger(spdlog::level::warn));
      const int port = local->bind();
      runner = std::thread([&] { local->run(); });
      target = "http://127.0.0.1:" + std::to_string(port);
      httplib::Client probe(target);
      for (int i = 0; i < 200 && !probe.Get("/health"); ++i) std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    LatencyReport report;
    try {
      report = measure_latency(documents, target, repetitions);
    } catch (...) {
      if (local) {
        local->stop();
        runner.join();
      }
      throw;
    }
    if (local) {
      local->stop();
      runner.join();
    }

    if (common.fmt() == Format::Json) {
      auto j = to_json(report);
      j["corpus"] = corpus_path;
      j["target"] = target;
      j["repetitions"] = repetitions;
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << "target " << target << ", " << documents.size() << " documents x " << repetitions << "\n"
                << latency_text(report);
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "leakwarden: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local secret-leak analysis service and tools"};
  app.set_version_flag("--version", std::string(LEAKWARDEN_VERSION));
  app.require_subcommand(1);

  Common serve_opts;
  int port = 8765;
  std::string bind = "127.0.0.1";
  auto* serve = app.add_subcommand("serve", "Run the HTTP analysis service");
  add_common(*serve, serve_opts, false);
  serve->add_option("--port", port, "Listen port (0 picks a free port)")
      ->check(CLI::Range(0, 65535))
      ->envname("LEAKWARDEN_PORT");
  serve->add_option("--bind", bind, "Listen address")->envname("LEAKWARDEN_BIND");

  Common scan_opts;
  std::vector<std::string> paths;
  auto* scan = app.add_subcommand("scan", "Scan files or directories and report classified findings");
  add_common(*scan, scan_opts, true);
  scan->add_option("paths", paths, "Files or directories")->required();

  Common eval_opts;
  std::string eval_corpus = LEAKWARDEN_DEFAULT_CORPUS;
  auto* eval = app.add_subcommand("eval", "Score regex-only and classified findings against a labeled corpus");
  add_common(*eval, eval_opts, true);
  eval->add_option("--corpus", eval_corpus, "Labeled corpus (JSON)")->envname("LEAKWARDEN_CORPUS");

  Common bench_opts;
  std::string bench_corpus = LEAKWARDEN_DEFAULT_CORPUS;
  std::size_t repetitions = 2;
  std::string target;
  auto* bench = app.add_subcommand("bench", "Measure /analyze latency over a corpus");
  add_common(*bench, bench_opts, true);
  bench->add_option("--corpus", bench_corpus, "Corpus whose documents are posted")->envname("LEAKWARDEN_CORPUS");
  bench->add_option("--repetitions", repetitions, "Requests per document")->check(CLI::PositiveNumber);
  bench->add_option("--target", target, "Running service (http://host:port); default starts one in-process")
      ->envname("LEAKWARDEN_TARGET");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*serve) return cmd_serve(serve_opts, port, bind);
  if (*scan) return cmd_scan(scan_opts, paths);
  if (*eval) return cmd_eval(eval_opts, eval_corpus);
  return cmd_bench(bench_opts, bench_corpus, repetitions, target);
}
