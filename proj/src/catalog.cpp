#include "leakwarden/catalog.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "leakwarden/digest.hpp"

namespace leakwarden {

namespace {

constexpr std::array<std::pair<Category, std::string_view>, 6> kCategories{{
    {Category::CloudKey, "cloud-key"},
    {Category::VcsToken, "vcs-token"},
    {Category::ChatToken, "chat-token"},
    {Category::PrivateKey, "private-key"},
    {Category::GenericAssignment, "generic-assignment"},
    {Category::Other, "other"},
}};

std::string describe(const RuleDefect& d) {
  switch (d.kind) {
    case RuleDefect::Kind::NonCompiling:
      return "does not compile: " + d.message;
    case RuleDefect::Kind::EmptyLanguage:
      return "matches no string";
    case RuleDefect::Kind::MatchesEmpty:
      return "matches the empty string";
  }
  return d.message;
}

std::size_t line_of(const YAML::Node& node) {
  const auto mark = node.Mark();
  return mark.line >= 0 ? static_cast<std::size_t>(mark.line) + 1 : 0;
}

}  // namespace

std::string_view to_string(Category c) noexcept {
  for (const auto& [cat, name] : kCategories)
    if (cat == c) return name;
  return "other";
}

std::optional<Category> parse_category(std::string_view s) noexcept {
  for (const auto& [cat, name] : kCategories)
    if (name == s) return cat;
  return std::nullopt;
}

bool ValidationResult::has(RuleDefect::Kind k) const noexcept {
  for (const auto& d : defects)
    if (d.kind == k) return true;
  return false;
}

ValidationResult validate_rule(const RuleRecord& rule) {
  ValidationResult result;
  try {
    const auto prog = pattern::Program::compile(rule.pattern);
    if (prog.empty_language()) result.defects.push_back({RuleDefect::Kind::EmptyLanguage, "no string can match"});
    if (prog.matches_empty())
      result.defects.push_back({RuleDefect::Kind::MatchesEmpty, "zero-width matches would be unbounded"});
  } catch (const pattern::SyntaxError& e) {
    result.defects.push_back(
        {RuleDefect::Kind::NonCompiling, std::string(e.what()) + " at offset " + std::to_string(e.offset())});
  }
  return result;
}

CatalogError::CatalogError(Kind kind, std::string rule_id, std::size_t line, const std::string& message)
    : std::runtime_error([&] {
        std::string text = "catalog";
        if (line > 0) text += " line " + std::to_string(line);
        if (!rule_id.empty()) text += " rule '" + rule_id + "'";
        return text + ": " + message;
      }()),
      kind_(kind),
      rule_id_(std::move(rule_id)),
      line_(line) {}

std::string catalog_version(std::span<const RuleRecord> rules) {
  Sha256 h;
  h.field("leakwarden-catalog-v1");
  for (const auto& r : rules) {
    h.field(r.id).field(r.name).field(r.pattern).field(to_string(r.category)).field(r.enabled ? "1" : "0");
  }
  return to_hex(h.finish());
}

namespace {

RuleCatalog build_catalog(std::vector<RuleRecord> rules, const std::vector<std::size_t>& lines) {
  auto line_at = [&](std::size_t i) { return i < lines.size() ? lines[i] : std::size_t{0}; };
  std::unordered_map<std::string, std::size_t> seen;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const auto& r = rules[i];
    if (r.id.empty()) throw CatalogError(CatalogError::Kind::MissingField, "", line_at(i), "empty rule id");
    if (auto [it, inserted] = seen.emplace(r.id, i); !inserted) {
      throw CatalogError(CatalogError::Kind::DuplicateId, r.id, line_at(i),
                         "duplicate id (first defined at entry " + std::to_string(it->second + 1) + ")");
    }
    const auto v = validate_rule(r);
    if (!v.ok()) throw CatalogError(CatalogError::Kind::InvalidPattern, r.id, line_at(i), describe(v.defects.front()));
  }
  RuleCatalog catalog;
  catalog.version = catalog_version(rules);
  catalog.rules = std::move(rules);
  return catalog;
}

}  // namespace

RuleCatalog make_catalog(std::vector<RuleRecord> rules) { return build_catalog(std::move(rules), {}); }

RuleCatalog load_catalog(std::string_view document) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(document));
  } catch (const YAML::Exception& e) {
    throw CatalogError(CatalogError::Kind::Parse, "", static_cast<std::size_t>(e.mark.line + 1), e.msg);
  }

  std::vector<RuleRecord> rules;
  std::vector<std::size_t> lines;
  if (root.IsNull()) return build_catalog({}, {});
  if (!root.IsMap()) throw CatalogError(CatalogError::Kind::Parse, "", line_of(root), "top level must be a mapping");

  for (const auto& kv : root) {
    const auto key = kv.first.as<std::string>();
    if (key != "rules" && key != "format")
      throw CatalogError(CatalogError::Kind::Parse, "", line_of(kv.first), "unknown top-level key '" + key + "'");
  }
  if (const auto format = root["format"]; format && format.as<std::string>() != "1")
    throw CatalogError(CatalogError::Kind::Parse, "", line_of(format), "unsupported format " + format.as<std::string>());

  const YAML::Node list = root["rules"];
  if (!list || list.IsNull()) return build_catalog({}, {});
  if (!list.IsSequence()) throw CatalogError(CatalogError::Kind::Parse, "", line_of(list), "'rules' must be a list");

  for (const auto& entry : list) {
    const std::size_t line = line_of(entry);
    if (!entry.IsMap()) throw CatalogError(CatalogError::Kind::Parse, "", line, "rule entry must be a mapping");
    RuleRecord rule;
    auto scalar = [&](const char* key, bool required) -> std::optional<std::string> {
      const YAML::Node n = entry[key];
      if (!n) {
        if (required) throw CatalogError(CatalogError::Kind::MissingField, rule.id, line, std::string("missing '") + key + "'");
        return std::nullopt;
      }
      if (!n.IsScalar())
        throw CatalogError(CatalogError::Kind::Parse, rule.id, line_of(n), std::string("'") + key + "' must be a scalar");
      return n.Scalar();
    };
    for (const auto& kv : entry) {
      const auto key = kv.first.as<std::string>();
      if (key != "id" && key != "name" && key != "pattern" && key != "category" && key != "enabled")
        throw CatalogError(CatalogError::Kind::Parse, "", line_of(kv.first), "unknown rule key '" + key + "'");
    }
    rule.id = *scalar("id", true);
    rule.pattern = *scalar("pattern", true);
    rule.name = scalar("name", false).value_or(rule.id);
    const auto cat = *scalar("category", true);
    const auto parsed = parse_category(cat);
    if (!parsed) throw CatalogError(CatalogError::Kind::Parse, rule.id, line, "unknown category '" + cat + "'");
    rule.category = *parsed;
    if (const auto enabled = scalar("enabled", false)) {
      if (*enabled == "true") {
        rule.enabled = true;
      } else if (*enabled == "false") {
        rule.enabled = false;
      } else {
        throw CatalogError(CatalogError::Kind::Parse, rule.id, line, "'enabled' must be true or false");
      }
    }
    rules.push_back(std::move(rule));
    lines.push_back(line);
  }
  return build_catalog(std::move(rules), lines);
}

RuleCatalog load_catalog_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CatalogError(CatalogError::Kind::Io, "", 0, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_catalog(ss.str());
}

std::string serialize_catalog(const RuleCatalog& catalog) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "format" << YAML::Value << 1;
  out << YAML::Key << "rules" << YAML::Value << YAML::BeginSeq;
  for (const auto& r : catalog.rules) {
    out << YAML::BeginMap;
    out << YAML::Key << "id" << YAML::Value << YAML::DoubleQuoted << r.id;
    out << YAML::Key << "name" << YAML::Value << YAML::DoubleQuoted << r.name;
    out << YAML::Key << "pattern" << YAML::Value << YAML::SingleQuoted << r.pattern;
    out << YAML::Key << "category" << YAML::Value << std::string(to_string(r.category));
    out << YAML::Key << "enabled" << YAML::Value << YAML::TrueFalseBool << r.enabled;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq << YAML::EndMap;
  return std::string("# catalog version ") + catalog.version + "\n" + out.c_str() + "\n";
}

CompiledMatcher compile_catalog(const RuleCatalog& catalog) {
  CompiledMatcher m;
  m.version_ = catalog.version;
  for (const auto& r : catalog.rules) {
    if (!r.enabled) continue;
    const auto v = validate_rule(r);
    if (!v.ok()) throw CatalogError(CatalogError::Kind::InvalidPattern, r.id, 0, describe(v.defects.front()));
    m.programs_.push_back(pattern::Program::compile(r.pattern));
    m.rules_.push_back(r);
  }
  for (std::uint32_t i = 0; i < m.programs_.size(); ++i) {
    const auto& first = m.programs_[i].first_set();
    for (std::size_t c = 0; c < 128; ++c)
      if (first.ascii[c]) m.start_table_[c].push_back(i);
    if (first.non_ascii) m.non_ascii_starters_.push_back(i);
  }
  return m;
}

std::vector<CompiledMatcher::RuleMatch> CompiledMatcher::match(std::string_view text) const {
  const pattern::Subject subject(text);
  return match(subject);
}

std::vector<CompiledMatcher::RuleMatch> CompiledMatcher::match(const pattern::Subject& subject) const {
  // One pass over the text distributes candidate start positions to the
  // rules whose first symbol fits, then each rule runs only from those.
  std::vector<std::vector<std::uint32_t>> starts(programs_.size());
  for (std::size_t i = 0; i < subject.size(); ++i) {
    const char32_t c = subject.at(i);
    const auto& rules = c < 128 ? start_table_[c] : non_ascii_starters_;
    for (auto r : rules) starts[r].push_back(static_cast<std::uint32_t>(i));
  }
  std::vector<RuleMatch> out;
  for (std::uint32_t r = 0; r < programs_.size(); ++r) {
    for (const auto& mt : programs_[r].scan(subject, starts[r])) out.push_back({r, mt});
  }
  return out;
}

}  // namespace leakwarden
