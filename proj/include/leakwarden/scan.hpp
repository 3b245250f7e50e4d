#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "leakwarden/catalog.hpp"

namespace leakwarden {

// Half-open byte range [start, end).
struct ByteSpan {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end - start; }
  friend auto operator<=>(const ByteSpan&, const ByteSpan&) = default;
};

// Text adjacent to a candidate, counted in characters. The candidate itself
// is not part of the window.
struct ContextWindow {
  static constexpr std::size_t kBudget = 200;
  static constexpr std::size_t kSide = 100;

  std::string before;
  std::string after;

  friend bool operator==(const ContextWindow&, const ContextWindow&) = default;
};

struct Candidate {
  std::string text;
  ByteSpan span;
  std::string rule_id;
  ContextWindow context;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

struct ScanOptions {
  std::size_t max_document_bytes = std::size_t{1} << 20;
};

// Throws DocumentTooLarge when the document exceeds the configured limit.
std::vector<Candidate> extract_candidates(std::string_view document, const CompiledMatcher& matcher,
                                          const ScanOptions& options = {});

// Nominal 100/100 split; a short side donates its unused budget to the
// other. Throws ContractViolation for a span that is empty, out of range or
// not on character boundaries.
ContextWindow extract_context(std::string_view document, ByteSpan span);

// Drops repeated (span, rule_id) pairs, keeping first occurrences in order.
std::vector<Candidate> dedupe_candidates(std::vector<Candidate> candidates);

// Batch kernels: one candidate list per document. extract_batch splits the
// documents across OpenMP threads; extract_batch_serial is the reference.
std::vector<std::vector<Candidate>> extract_batch(std::span<const std::string> documents,
                                                  const CompiledMatcher& matcher, const ScanOptions& options = {});
std::vector<std::vector<Candidate>> extract_batch_serial(std::span<const std::string> documents,
                                                         const CompiledMatcher& matcher,
                                                         const ScanOptions& options = {});

}  // namespace leakwarden
