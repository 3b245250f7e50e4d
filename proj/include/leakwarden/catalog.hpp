#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "leakwarden/pattern.hpp"

namespace leakwarden {

enum class Category { CloudKey, VcsToken, ChatToken, PrivateKey, GenericAssignment, Other };

std::string_view to_string(Category c) noexcept;
std::optional<Category> parse_category(std::string_view s) noexcept;

struct RuleRecord {
  std::string id;
  std::string name;
  std::string pattern;
  Category category = Category::Other;
  bool enabled = true;

  friend bool operator==(const RuleRecord&, const RuleRecord&) = default;
};

struct RuleDefect {
  enum class Kind { NonCompiling, EmptyLanguage, MatchesEmpty };

  Kind kind;
  std::string message;
};

struct ValidationResult {
  std::vector<RuleDefect> defects;

  bool ok() const noexcept { return defects.empty(); }
  bool has(RuleDefect::Kind k) const noexcept;
};

// Defects are returned, never thrown.
ValidationResult validate_rule(const RuleRecord& rule);

class CatalogError : public std::runtime_error {
 public:
  enum class Kind { Parse, DuplicateId, InvalidPattern, MissingField, Io };

  CatalogError(Kind kind, std::string rule_id, std::size_t line, const std::string& message);

  Kind kind() const noexcept { return kind_; }
  const std::string& rule_id() const noexcept { return rule_id_; }
  // 1-based line in the source document, 0 when unknown.
  std::size_t line() const noexcept { return line_; }

 private:
  Kind kind_;
  std::string rule_id_;
  std::size_t line_;
};

struct RuleCatalog {
  std::vector<RuleRecord> rules;
  std::string version;

  friend bool operator==(const RuleCatalog&, const RuleCatalog&) = default;
};

// Content hash over the canonical form of every record, in order.
std::string catalog_version(std::span<const RuleRecord> rules);

// Checks id uniqueness and pattern validity, then stamps the version.
RuleCatalog make_catalog(std::vector<RuleRecord> rules);

// Parses the YAML catalog format described in docs/catalog-format.md.
RuleCatalog load_catalog(std::string_view document);
RuleCatalog load_catalog_file(const std::filesystem::path& path);

// Canonical YAML rendering; load_catalog(serialize_catalog(c)) == c.
std::string serialize_catalog(const RuleCatalog& catalog);

// All enabled rules compiled together. Immutable once built and safe to
// share between threads.
class CompiledMatcher {
 public:
  struct RuleMatch {
    std::uint32_t rule;  // index into rules()
    pattern::Match match;
  };

  // Per-rule leftmost-first non-overlapping matches, grouped by rule in
  // catalog order.
  std::vector<RuleMatch> match(std::string_view text) const;
  std::vector<RuleMatch> match(const pattern::Subject& subject) const;

  const std::string& catalog_version() const noexcept { return version_; }
  std::span<const RuleRecord> rules() const noexcept { return rules_; }
  std::size_t size() const noexcept { return rules_.size(); }

 private:
  friend CompiledMatcher compile_catalog(const RuleCatalog& catalog);

  std::vector<RuleRecord> rules_;
  std::vector<pattern::Program> programs_;
  // For each ASCII symbol, the rules that can begin a match on it.
  std::array<std::vector<std::uint32_t>, 128> start_table_;
  std::vector<std::uint32_t> non_ascii_starters_;
  std::string version_;
};

// Throws CatalogError(InvalidPattern) naming the first defective enabled
// rule.
CompiledMatcher compile_catalog(const RuleCatalog& catalog);

}  // namespace leakwarden
