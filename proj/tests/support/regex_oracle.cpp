#include "regex_oracle.hpp"

#include <algorithm>

namespace lwtest {

DecodedText decode_utf8(std::string_view s) {
  DecodedText out;
  std::size_t i = 0;
  const auto byte = [&](std::size_t k) { return static_cast<unsigned char>(s[k]); };
  const auto cont = [&](std::size_t k) { return k < s.size() && (byte(k) & 0xC0) == 0x80; };
  while (i < s.size()) {
    out.offsets.push_back(i);
    const unsigned b = byte(i);
    wchar_t cp = 0xFFFD;
    std::size_t len = 1;
    if (b < 0x80) {
      cp = static_cast<wchar_t>(b);
    } else if (b >= 0xC2 && b <= 0xDF && cont(i + 1)) {
      cp = static_cast<wchar_t>(((b & 0x1F) << 6) | (byte(i + 1) & 0x3F));
      len = 2;
    } else if (b >= 0xE0 && b <= 0xEF && cont(i + 1) && cont(i + 2)) {
      const unsigned v = ((b & 0x0F) << 12) | ((byte(i + 1) & 0x3F) << 6) | (byte(i + 2) & 0x3F);
      if (v >= 0x800 && (v < 0xD800 || v > 0xDFFF)) {
        cp = static_cast<wchar_t>(v);
        len = 3;
      }
    } else if (b >= 0xF0 && b <= 0xF4 && cont(i + 1) && cont(i + 2) && cont(i + 3)) {
      const unsigned v = ((b & 0x07) << 18) | ((byte(i + 1) & 0x3F) << 12) | ((byte(i + 2) & 0x3F) << 6) |
                         (byte(i + 3) & 0x3F);
      if (v >= 0x10000 && v <= 0x10FFFF) {
        cp = static_cast<wchar_t>(v);
        len = 4;
      }
    }
    out.chars.push_back(cp);
    i += len;
  }
  out.offsets.push_back(s.size());
  return out;
}

std::wregex oracle_regex(std::string_view pattern) {
  auto flags = std::regex_constants::ECMAScript;
  if (pattern.substr(0, 4) == "(?i)") {
    pattern.remove_prefix(4);
    flags |= std::regex_constants::icase;
  }
  const auto decoded = decode_utf8(pattern);
  return std::wregex(decoded.chars, flags);
}

RegexOracle::RegexOracle(std::span<const leakwarden::RuleRecord> rules) {
  for (const auto& r : rules)
    if (r.enabled) rules_.push_back({r.id, oracle_regex(r.pattern)});
}

std::vector<OracleMatch> RegexOracle::scan_rule(std::size_t rule, const DecodedText& text) const {
  std::vector<OracleMatch> out;
  const auto& r = rules_[rule];
  const auto begin = text.chars.cbegin();
  const auto end = text.chars.cend();
  auto pos = begin;
  while (pos <= end) {
    std::wsmatch m;
    auto flags = std::regex_constants::match_default;
    if (pos != begin) flags |= std::regex_constants::match_prev_avail;
    if (!std::regex_search(pos, end, m, r.re, flags)) break;
    auto cb = m[0].first;
    auto ce = m[0].second;
    if (m.size() > 1 && m[1].matched && m[1].length() > 0) {
      cb = m[1].first;
      ce = m[1].second;
    }
    out.push_back({r.id, {text.offsets[static_cast<std::size_t>(cb - begin)],
                          text.offsets[static_cast<std::size_t>(ce - begin)]}});
    if (m[0].second == m[0].first) {
      if (m[0].second == end) break;
      pos = m[0].second + 1;
    } else {
      pos = m[0].second;
    }
  }
  return out;
}

std::vector<OracleMatch> RegexOracle::scan(std::string_view text) const {
  const auto decoded = decode_utf8(text);
  std::vector<OracleMatch> out;
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    auto part = scan_rule(i, decoded);
    out.insert(out.end(), part.begin(), part.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace lwtest
