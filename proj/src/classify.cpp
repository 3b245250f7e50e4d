#include "leakwarden/classify.hpp"

#include <httplib.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <json.hpp>
#include <map>

#include "leakwarden/errors.hpp"
#include "leakwarden/utf8.hpp"

namespace leakwarden {

std::string_view to_string(Label l) noexcept {
  switch (l) {
    case Label::Secret:
      return "Secret";
    case Label::NonSensitive:
      return "NonSensitive";
    case Label::Unverified:
      return "Unverified";
  }
  return "NonSensitive";
}

Classification make_classification(double confidence, double threshold, std::string classifier_id) {
  return {label_for(confidence, threshold), confidence, std::move(classifier_id), threshold};
}

ClassifierUnavailable::ClassifierUnavailable(Mode mode, const std::string& detail)
    : std::runtime_error("classifier unavailable (" + std::string(to_string(mode)) + "): " + detail), mode_(mode) {}

std::string_view to_string(ClassifierUnavailable::Mode m) noexcept {
  switch (m) {
    case ClassifierUnavailable::Mode::Timeout:
      return "timeout";
    case ClassifierUnavailable::Mode::ConnectionRefused:
      return "connection-refused";
    case ClassifierUnavailable::Mode::MalformedResponse:
      return "malformed-response";
    case ClassifierUnavailable::Mode::HttpStatus:
      return "http-status";
  }
  return "unknown";
}

void ClassifierSpec::validate() const {
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw std::invalid_argument("threshold must be in [0, 1]");
  if (kind == Kind::Remote && endpoint.empty()) throw std::invalid_argument("remote classifier requires an endpoint");
  if (max_concurrent_requests == 0 || max_concurrent_requests > 64)
    throw std::invalid_argument("max concurrent requests must be in [1, 64]");
  if (timeout.count() <= 0) throw std::invalid_argument("timeout must be positive");
}

std::shared_ptr<const Classifier> make_classifier(const ClassifierSpec& spec) {
  spec.validate();
  if (spec.kind == ClassifierSpec::Kind::Remote) return std::make_shared<RemoteClassifier>(spec);
  return std::make_shared<HeuristicClassifier>();
}

// ---------------------------------------------------------------------------
// Heuristic reference classifier

namespace {

namespace weights {
constexpr double kBias = 0.05;
constexpr double kEntropy = 0.60;
constexpr double kShort = -0.20;        // fewer than 8 characters
constexpr double kLong = 0.10;          // 16..128 characters
constexpr double kVeryLong = 0.05;      // more than 128 characters
constexpr double kPlaceholder = -0.70;  // any placeholder-lexicon hit
constexpr double kHeavyMask = -0.60;    // at least a quarter masking characters
constexpr double kLightMask = -0.30;    // any masking character
constexpr double kContextStep = 0.12;   // per distinct context term
constexpr double kContextCap = 0.24;    // per direction
}  // namespace weights

constexpr std::array<std::string_view, 21> kPlaceholderTerms{
    "example", "your",    "dummy",  "sample",  "redacted", "placeholder", "xxx",
    "<",       ">",       "1234567890", "fake", "changeme", "insert",     "replace",
    "here",    "test",    "0000",   "abcdef",  "foobar",   "lorem",       "mock",
};

constexpr std::array<std::string_view, 15> kNegativeContext{
    "example", "e.g.", "replace", "docs",   "documentation", "placeholder", "dummy", "sample",
    "fake",    "redacted", "template", "checksum", "sha256", "md5", "hash",
};

constexpr std::array<std::string_view, 9> kPositiveContext{
    "prod", "leak", "oops", "accidentally", "real", "live", "exposed", "committed", "pushed",
};

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Term occurrence that starts a word (so "live" does not fire on "deliver").
bool has_word_prefix(std::string_view haystack, std::string_view term) {
  for (std::size_t at = haystack.find(term); at != std::string_view::npos; at = haystack.find(term, at + 1)) {
    if (at == 0 || !std::isalpha(static_cast<unsigned char>(haystack[at - 1]))) return true;
  }
  return false;
}

template <std::size_t N>
std::size_t count_terms(std::string_view text, const std::array<std::string_view, N>& terms) {
  std::size_t hits = 0;
  for (auto t : terms)
    if (has_word_prefix(text, t)) ++hits;
  return hits;
}

double length_term(std::size_t chars) {
  if (chars < 8) return weights::kShort;
  if (chars < 16) return 0.0;
  if (chars <= 128) return weights::kLong;
  return weights::kVeryLong;
}

}  // namespace

double normalized_entropy(std::string_view text) {
  std::map<char32_t, std::size_t> freq;
  std::size_t n = 0;
  for (std::size_t i = 0; i < text.size();) {
    const auto d = utf8::decode_at(text, i);
    ++freq[d.cp];
    ++n;
    i += d.length;
  }
  if (n < 2) return 0.0;
  double h = 0.0;
  for (const auto& [cp, count] : freq) {
    const double p = static_cast<double>(count) / static_cast<double>(n);
    h -= p * std::log2(p);
  }
  const double max_h = std::log2(static_cast<double>(std::min<std::size_t>(n, 64)));
  return std::clamp(h / max_h, 0.0, 1.0);
}

double heuristic_score(std::string_view candidate_text, const ContextWindow& context) {
  return heuristic_score(ClassifierInput{candidate_text, context.before, context.after});
}

double heuristic_score(const ClassifierInput& input) {
  const std::string_view text = input.candidate;
  std::size_t chars = 0;
  std::size_t masked = 0;
  for (std::size_t i = 0; i < text.size();) {
    const auto d = utf8::decode_at(text, i);
    if (d.cp == U'*' || d.cp == U'…') ++masked;
    ++chars;
    i += d.length;
  }

  double score = weights::kBias + weights::kEntropy * normalized_entropy(text) + length_term(chars);

  const std::string lowered = ascii_lower(text);
  bool placeholder = false;
  for (auto t : kPlaceholderTerms) {
    if (lowered.find(t) != std::string::npos) {
      placeholder = true;
      break;
    }
  }
  if (placeholder) score += weights::kPlaceholder;

  if (masked > 0) score += masked * 4 >= chars ? weights::kHeavyMask : weights::kLightMask;

  const std::string ctx = ascii_lower(input.context_before) + "\n" + ascii_lower(input.context_after);
  const double pos = std::min(weights::kContextCap, weights::kContextStep * count_terms(ctx, kPositiveContext));
  const double neg = std::min(weights::kContextCap, weights::kContextStep * count_terms(ctx, kNegativeContext));
  score += pos - neg;

  return std::clamp(score, 0.0, 1.0);
}

std::vector<double> HeuristicClassifier::score(std::span<const ClassifierInput> batch) const {
  std::vector<double> out(batch.size());
  const auto n = static_cast<std::ptrdiff_t>(batch.size());
#pragma omp parallel for schedule(static) if (n >= 64)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = heuristic_score(batch[static_cast<std::size_t>(i)]);
  }
  return out;
}

std::vector<double> HeuristicClassifier::score_serial(std::span<const ClassifierInput> batch) const {
  std::vector<double> out;
  out.reserve(batch.size());
  for (const auto& in : batch) out.push_back(heuristic_score(in));
  return out;
}

// ---------------------------------------------------------------------------
// Remote adapter

namespace {

struct ParsedEndpoint {
  std::string origin;
  std::string path;
};

ParsedEndpoint parse_endpoint(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos || url.compare(0, scheme_end, "http") != 0)
    throw std::invalid_argument("endpoint must be an http:// URL: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

class SlotGuard {
 public:
  explicit SlotGuard(std::counting_semaphore<64>& s) : s_(s) { s_.acquire(); }
  ~SlotGuard() { s_.release(); }
  SlotGuard(const SlotGuard&) = delete;
  SlotGuard& operator=(const SlotGuard&) = delete;

 private:
  std::counting_semaphore<64>& s_;
};

}  // namespace

RemoteClassifier::RemoteClassifier(const ClassifierSpec& spec)
    : timeout_((spec.validate(), spec.timeout)),
      id_("remote:" + spec.endpoint),
      slots_(static_cast<std::ptrdiff_t>(spec.max_concurrent_requests)) {
  auto parsed = parse_endpoint(spec.endpoint);
  scheme_host_port_ = std::move(parsed.origin);
  path_ = std::move(parsed.path);
}

std::vector<double> RemoteClassifier::score(std::span<const ClassifierInput> batch) const {
  if (batch.empty()) return {};
  using Mode = ClassifierUnavailable::Mode;

  nlohmann::json body = nlohmann::json::array();
  for (const auto& in : batch) {
    body.push_back({{"candidate", in.candidate},
                    {"context_before", in.context_before},
                    {"context_after", in.context_after}});
  }
  const std::string payload = body.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);

  httplib::Result res;
  const auto started = std::chrono::steady_clock::now();
  {
    SlotGuard slot(slots_);
    httplib::Client client(scheme_host_port_);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout_ - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_write_timeout(secs.count(), usecs.count());
    res = client.Post(path_, payload, "application/json");
  }
  const auto elapsed = std::chrono::steady_clock::now() - started;

  if (!res) {
    const auto err = res.error();
    if (err == httplib::Error::ConnectionTimeout ||
        (err == httplib::Error::Read && elapsed >= timeout_ * 9 / 10)) {
      throw ClassifierUnavailable(Mode::Timeout, "no reply within " + std::to_string(timeout_.count()) + " ms");
    }
    if (err == httplib::Error::Connection) throw ClassifierUnavailable(Mode::ConnectionRefused, scheme_host_port_);
    throw ClassifierUnavailable(Mode::MalformedResponse, httplib::to_string(err));
  }
  if (res->status != 200) throw ClassifierUnavailable(Mode::HttpStatus, "status " + std::to_string(res->status));

  nlohmann::json reply;
  try {
    reply = nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::exception&) {
    throw ClassifierUnavailable(Mode::MalformedResponse, "reply is not JSON");
  }
  if (!reply.is_array() || reply.size() != batch.size())
    throw ClassifierUnavailable(Mode::MalformedResponse, "expected an array of " + std::to_string(batch.size()));
  std::vector<double> out;
  out.reserve(batch.size());
  for (const auto& item : reply) {
    if (!item.is_object() || !item.contains("confidence") || !item["confidence"].is_number())
      throw ClassifierUnavailable(Mode::MalformedResponse, "item without numeric confidence");
    const double c = item["confidence"].get<double>();
    if (!(c >= 0.0 && c <= 1.0)) throw ClassifierUnavailable(Mode::MalformedResponse, "confidence outside [0, 1]");
    out.push_back(c);
  }
  return out;
}

// ---------------------------------------------------------------------------

Classification classify(const Candidate& candidate, const Classifier& classifier, double threshold) {
  const ClassifierInput in = ClassifierInput::of(candidate);
  const auto scores = classifier.score(std::span(&in, 1));
  return make_classification(scores.at(0), threshold, classifier.id());
}

Classification classify(const Candidate& candidate, const ClassifierSpec& spec) {
  return classify(candidate, *make_classifier(spec), spec.threshold);
}

std::vector<Classification> classify_batch(std::span<const Candidate> candidates, const Classifier& classifier,
                                           double threshold) {
  std::vector<ClassifierInput> inputs;
  inputs.reserve(candidates.size());
  for (const auto& c : candidates) inputs.push_back(ClassifierInput::of(c));
  const auto scores = classifier.score(inputs);
  if (scores.size() != inputs.size()) throw ContractViolation("classifier returned a different number of scores");
  std::vector<Classification> out;
  out.reserve(scores.size());
  for (double s : scores) out.push_back(make_classification(s, threshold, classifier.id()));
  return out;
}

std::vector<Classification> remote_classify(std::span<const ClassifierInput> batch, const ClassifierSpec& spec) {
  if (spec.kind != ClassifierSpec::Kind::Remote) throw ContractViolation("remote_classify needs a remote spec");
  const RemoteClassifier remote(spec);
  const auto scores = remote.score(batch);
  std::vector<Classification> out;
  out.reserve(scores.size());
  for (double s : scores) out.push_back(make_classification(s, spec.threshold, remote.id()));
  return out;
}

std::vector<Finding> filter_findings(std::span<const Candidate> candidates,
                                     std::span<const Classification> classifications) {
  if (candidates.size() != classifications.size()) {
    throw ContractViolation("filter_findings: " + std::to_string(candidates.size()) + " candidates but " +
                            std::to_string(classifications.size()) + " classifications");
  }
  std::vector<Finding> out;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (classifications[i].label == Label::Secret) out.push_back({candidates[i], classifications[i]});
  }
  return out;
}

}  // namespace leakwarden
