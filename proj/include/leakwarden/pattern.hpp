#pragma once

// Regular-expression dialect used by rule catalogs.
//
// The dialect is the portable subset of ECMAScript syntax: literals, `.`,
// bracket classes, \d \w \s (and negations), groups `(...)` / `(?:...)`,
// alternation, greedy and lazy quantifiers `* + ? {n} {n,} {n,m}`, the
// anchors `^ $` (text start and end) and `\b \B`. A leading `(?i)` makes the
// whole pattern ASCII case-insensitive. Backreferences, lookaround and
// named groups are rejected.
//
// Matching runs over Unicode scalar values in linear time (Pike VM) with
// leftmost-first (backtracking-compatible) preference. Character-class
// semantics are ASCII: every non-ASCII character is matched only by `.`,
// negated classes, \D \W \S, or an explicit literal. `.` excludes the line
// terminators \n \r U+2028 U+2029.

#include <bitset>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace leakwarden::pattern {

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(std::string message, std::size_t offset, bool unsupported)
      : std::runtime_error(std::move(message)), offset_(offset), unsupported_(unsupported) {}

  // Byte offset into the pattern source.
  std::size_t offset() const noexcept { return offset_; }
  // Valid regex in general, but outside the dialect.
  bool unsupported() const noexcept { return unsupported_; }

 private:
  std::size_t offset_;
  bool unsupported_;
};

struct CharSet {
  std::bitset<128> ascii;
  std::vector<std::pair<char32_t, char32_t>> ranges;  // non-ASCII only
  bool all_non_ascii = false;
  bool negated = false;  // applies to the non-ASCII part; `ascii` is final

  bool contains(char32_t c) const noexcept;
  bool empty() const noexcept;
};

// Symbols a match can begin with (over-approximation).
struct FirstSet {
  std::bitset<128> ascii;
  bool non_ascii = false;

  bool contains(char32_t c) const noexcept { return c < 128 ? ascii[c] : non_ascii; }
};

// A document decoded once and shared by every program that scans it.
class Subject {
 public:
  explicit Subject(std::string_view text);

  std::size_t size() const noexcept { return chars_.size(); }
  char32_t at(std::size_t i) const noexcept { return chars_[i]; }
  // Valid for i in [0, size()].
  std::size_t byte_offset(std::size_t i) const noexcept { return offsets_[i]; }
  std::string_view text() const noexcept { return text_; }

 private:
  std::string_view text_;
  std::vector<char32_t> chars_;
  std::vector<std::size_t> offsets_;
};

// Byte offsets into the subject text. The candidate range is capture group 1
// when the pattern has one and it participated with non-empty text,
// otherwise the whole match.
struct Match {
  std::size_t begin;
  std::size_t end;
  std::size_t candidate_begin;
  std::size_t candidate_end;

  friend bool operator==(const Match&, const Match&) = default;
};

class Program {
 public:
  static constexpr std::size_t kMaxInstructions = 50'000;
  static constexpr std::uint32_t kMaxRepeat = 1'000;

  // Throws SyntaxError.
  static Program compile(std::string_view source);

  bool case_insensitive() const noexcept { return icase_; }
  bool has_capture() const noexcept { return has_capture_; }
  // True when some match consumes no characters.
  bool matches_empty() const noexcept { return nullable_; }
  // True when no string at all can match.
  bool empty_language() const;
  const FirstSet& first_set() const noexcept { return first_; }
  std::size_t size() const noexcept { return code_.size(); }

  // Leftmost-first, non-overlapping matches. `starts` lists the symbol
  // indices whose character is in first_set(), ascending; matches only
  // begin at those indices.
  std::vector<Match> scan(const Subject& subject, std::span<const std::uint32_t> starts) const;
  std::vector<Match> scan(const Subject& subject) const;

  enum class Op : std::uint8_t { Char, Split, Jmp, Save, Assert, Match };
  enum class Anchor : std::uint8_t { TextStart, TextEnd, WordBoundary, NotWordBoundary };

  struct Inst {
    Op op;
    std::uint32_t x = 0;
    std::uint32_t y = 0;
  };

 private:
  std::vector<Inst> code_;
  std::vector<CharSet> sets_;
  FirstSet first_;
  bool icase_ = false;
  bool has_capture_ = false;
  bool nullable_ = false;

  friend class Compiler;
};

}  // namespace leakwarden::pattern
