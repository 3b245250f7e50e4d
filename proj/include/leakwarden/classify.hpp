#pragma once

#include <chrono>
#include <memory>
#include <semaphore>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "leakwarden/scan.hpp"

namespace leakwarden {

// Unverified is only produced by the service when the classifier is down.
enum class Label { Secret, NonSensitive, Unverified };

std::string_view to_string(Label l) noexcept;

struct Classification {
  Label label = Label::NonSensitive;
  double confidence = 0.0;
  std::string classifier_id;
  double threshold_used = 0.5;

  friend bool operator==(const Classification&, const Classification&) = default;
};

// Ties go to Secret.
constexpr Label label_for(double confidence, double threshold) noexcept {
  return confidence >= threshold ? Label::Secret : Label::NonSensitive;
}

Classification make_classification(double confidence, double threshold, std::string classifier_id);

struct Finding {
  Candidate candidate;
  Classification classification;
};

// What a classifier sees: the candidate and its surrounding text, kept as
// separate fields.
struct ClassifierInput {
  std::string_view candidate;
  std::string_view context_before;
  std::string_view context_after;

  static ClassifierInput of(const Candidate& c) noexcept {
    return {c.text, c.context.before, c.context.after};
  }
};

class ClassifierUnavailable : public std::runtime_error {
 public:
  enum class Mode { Timeout, ConnectionRefused, MalformedResponse, HttpStatus };

  ClassifierUnavailable(Mode mode, const std::string& detail);
  Mode mode() const noexcept { return mode_; }

 private:
  Mode mode_;
};

std::string_view to_string(ClassifierUnavailable::Mode m) noexcept;

class Classifier {
 public:
  virtual ~Classifier() = default;

  virtual const std::string& id() const noexcept = 0;
  // One confidence in [0, 1] per input, in input order. May throw
  // ClassifierUnavailable.
  virtual std::vector<double> score(std::span<const ClassifierInput> batch) const = 0;
};

struct ClassifierSpec {
  enum class Kind { Heuristic, Remote };

  Kind kind = Kind::Heuristic;
  std::string endpoint;  // http://host:port/path, remote only
  double threshold = 0.5;
  std::chrono::milliseconds timeout{2000};
  std::size_t max_concurrent_requests = 4;

  // Throws std::invalid_argument.
  void validate() const;
};

std::shared_ptr<const Classifier> make_classifier(const ClassifierSpec& spec);

// Weighted feature sum, clamped to [0, 1]. Weights are listed in
// docs/heuristic-classifier.md.
double heuristic_score(std::string_view candidate_text, const ContextWindow& context);
double heuristic_score(const ClassifierInput& input);

// Normalized Shannon entropy over characters: H / log2(min(len, 64)),
// 0 for strings shorter than 2 characters.
double normalized_entropy(std::string_view text);

class HeuristicClassifier final : public Classifier {
 public:
  static constexpr std::string_view kId = "heuristic-v1";

  const std::string& id() const noexcept override { return id_; }
  // Scores the batch across OpenMP threads.
  std::vector<double> score(std::span<const ClassifierInput> batch) const override;
  std::vector<double> score_serial(std::span<const ClassifierInput> batch) const;

 private:
  std::string id_{kId};
};

// Client for an externally hosted model. Wire format: POST a JSON array of
// {candidate, context_before, context_after}; the reply is a JSON array of
// {confidence} in the same order.
class RemoteClassifier final : public Classifier {
 public:
  explicit RemoteClassifier(const ClassifierSpec& spec);

  const std::string& id() const noexcept override { return id_; }
  std::vector<double> score(std::span<const ClassifierInput> batch) const override;

 private:
  std::string scheme_host_port_;
  std::string path_;
  std::chrono::milliseconds timeout_;
  std::string id_;
  mutable std::counting_semaphore<64> slots_;
};

Classification classify(const Candidate& candidate, const Classifier& classifier, double threshold);
// Builds the classifier described by `spec` for one call.
Classification classify(const Candidate& candidate, const ClassifierSpec& spec);

std::vector<Classification> classify_batch(std::span<const Candidate> candidates, const Classifier& classifier,
                                           double threshold);

std::vector<Classification> remote_classify(std::span<const ClassifierInput> batch, const ClassifierSpec& spec);

// Keeps the Secret-labeled candidates, in order. Throws ContractViolation on
// a length mismatch.
std::vector<Finding> filter_findings(std::span<const Candidate> candidates,
                                     std::span<const Classification> classifications);

}  // namespace leakwarden
