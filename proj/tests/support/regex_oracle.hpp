#pragma once

#include <compare>
#include <regex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "leakwarden/catalog.hpp"
#include "leakwarden/scan.hpp"

namespace lwtest {

// Per-rule brute-force matcher built on std::wregex (ECMAScript). Shares no
// code with the engine: its own UTF-8 decoder, its own handling of the
// leading (?i) flag.
struct OracleMatch {
  std::string rule_id;
  leakwarden::ByteSpan span;  // candidate span (group 1 when it took part)

  friend auto operator<=>(const OracleMatch&, const OracleMatch&) = default;
};

struct DecodedText {
  std::wstring chars;
  std::vector<std::size_t> offsets;  // byte offset of each char, plus the end
};

DecodedText decode_utf8(std::string_view text);

class RegexOracle {
 public:
  explicit RegexOracle(std::span<const leakwarden::RuleRecord> rules);

  // Sorted multiset of (rule_id, span) over all enabled rules.
  std::vector<OracleMatch> scan(std::string_view text) const;
  std::vector<OracleMatch> scan_rule(std::size_t rule, const DecodedText& text) const;

  std::size_t size() const noexcept { return rules_.size(); }

 private:
  struct Rule {
    std::string id;
    std::wregex re;
  };
  std::vector<Rule> rules_;
};

std::wregex oracle_regex(std::string_view pattern);

}  // namespace lwtest
