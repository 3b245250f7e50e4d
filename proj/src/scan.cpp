#include "leakwarden/scan.hpp"

#include <algorithm>
#include <exception>
#include <set>
#include <tuple>

#include "leakwarden/errors.hpp"
#include "leakwarden/utf8.hpp"

namespace leakwarden {

ContextWindow extract_context(std::string_view document, ByteSpan span) {
  if (span.start >= span.end || span.end > document.size() || !utf8::is_char_boundary(document, span.start) ||
      !utf8::is_char_boundary(document, span.end)) {
    throw ContractViolation("extract_context: invalid span [" + std::to_string(span.start) + ", " +
                            std::to_string(span.end) + ") for document of " + std::to_string(document.size()) +
                            " bytes");
  }

  // Availability is only needed up to the full budget on either side.
  const std::size_t before_probe = utf8::retreat(document, span.start, ContextWindow::kBudget);
  const std::size_t avail_before = utf8::count_chars(document.substr(before_probe, span.start - before_probe));
  const std::size_t after_probe_end = utf8::advance(document, span.end, ContextWindow::kBudget);
  const std::size_t avail_after = utf8::count_chars(document.substr(span.end, after_probe_end - span.end));

  std::size_t take_before = std::min(avail_before, ContextWindow::kSide);
  std::size_t take_after = std::min(avail_after, ContextWindow::kSide);
  const std::size_t spare = ContextWindow::kBudget - take_before - take_after;
  if (avail_before > take_before) {
    take_before += std::min(avail_before - take_before, spare);
  } else if (avail_after > take_after) {
    take_after += std::min(avail_after - take_after, spare);
  }

  ContextWindow w;
  const std::size_t b = utf8::retreat(document, span.start, take_before);
  w.before.assign(document.substr(b, span.start - b));
  const std::size_t e = utf8::advance(document, span.end, take_after);
  w.after.assign(document.substr(span.end, e - span.end));
  return w;
}

std::vector<Candidate> extract_candidates(std::string_view document, const CompiledMatcher& matcher,
                                          const ScanOptions& options) {
  if (document.size() > options.max_document_bytes)
    throw DocumentTooLarge(document.size(), options.max_document_bytes);

  const auto matches = matcher.match(document);
  const auto rules = matcher.rules();
  std::vector<Candidate> out;
  out.reserve(matches.size());
  for (const auto& m : matches) {
    Candidate c;
    c.span = {m.match.candidate_begin, m.match.candidate_end};
    c.text.assign(document.substr(c.span.start, c.span.size()));
    c.rule_id = rules[m.rule].id;
    c.context = extract_context(document, c.span);
    out.push_back(std::move(c));
  }
  std::stable_sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(a.span.start, a.rule_id, a.span.end) < std::tie(b.span.start, b.rule_id, b.span.end);
  });
  return out;
}

std::vector<Candidate> dedupe_candidates(std::vector<Candidate> candidates) {
  std::set<std::tuple<std::size_t, std::size_t, std::string>> seen;
  std::vector<Candidate> out;
  out.reserve(candidates.size());
  for (auto& c : candidates) {
    if (seen.emplace(c.span.start, c.span.end, c.rule_id).second) out.push_back(std::move(c));
  }
  return out;
}

std::vector<std::vector<Candidate>> extract_batch_serial(std::span<const std::string> documents,
                                                         const CompiledMatcher& matcher, const ScanOptions& options) {
  std::vector<std::vector<Candidate>> out;
  out.reserve(documents.size());
  for (const auto& doc : documents) out.push_back(extract_candidates(doc, matcher, options));
  return out;
}

std::vector<std::vector<Candidate>> extract_batch(std::span<const std::string> documents,
                                                  const CompiledMatcher& matcher, const ScanOptions& options) {
  std::vector<std::vector<Candidate>> out(documents.size());
  std::vector<std::exception_ptr> errors(documents.size());
  const auto n = static_cast<std::ptrdiff_t>(documents.size());

#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      out[k] = extract_candidates(documents[k], matcher, options);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }

  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace leakwarden
