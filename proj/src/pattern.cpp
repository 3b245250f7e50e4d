#include "leakwarden/pattern.hpp"

#include <algorithm>
#include <cstring>
#include <deque>
#include <limits>

#include "leakwarden/utf8.hpp"

namespace leakwarden::pattern {

bool CharSet::contains(char32_t c) const noexcept {
  if (c < 128) return ascii[c];
  bool in = all_non_ascii;
  if (!in) {
    for (const auto& [lo, hi] : ranges) {
      if (c >= lo && c <= hi) {
        in = true;
        break;
      }
    }
  }
  return in != negated;
}

bool CharSet::empty() const noexcept {
  const bool non_ascii_nonempty = negated ? !all_non_ascii : (all_non_ascii || !ranges.empty());
  return ascii.none() && !non_ascii_nonempty;
}

Subject::Subject(std::string_view text) : text_(text) {
  chars_.reserve(text.size());
  offsets_.reserve(text.size() + 1);
  for (std::size_t i = 0; i < text.size();) {
    const auto d = utf8::decode_at(text, i);
    chars_.push_back(d.cp);
    offsets_.push_back(i);
    i += d.length;
  }
  offsets_.push_back(text.size());
}

namespace {

bool is_word(char32_t c) noexcept {
  return c < 128 && (std::isalnum(static_cast<int>(c)) || c == '_');
}

struct Node {
  enum class Kind { Empty, Set, Concat, Alt, Repeat, Capture, Assert };

  Kind kind = Kind::Empty;
  std::vector<Node> kids;
  std::uint32_t set = 0;
  std::uint32_t min = 0;
  std::uint32_t max = 0;
  bool unbounded = false;
  bool greedy = true;
  int capture = 0;
  Program::Anchor anchor = Program::Anchor::TextStart;
};

bool nullable(const Node& n) {
  switch (n.kind) {
    case Node::Kind::Empty:
    case Node::Kind::Assert:
      return true;
    case Node::Kind::Set:
      return false;
    case Node::Kind::Concat:
      return std::all_of(n.kids.begin(), n.kids.end(), nullable);
    case Node::Kind::Alt:
      return std::any_of(n.kids.begin(), n.kids.end(), nullable);
    case Node::Kind::Repeat:
      return n.min == 0 || nullable(n.kids.front());
    case Node::Kind::Capture:
      return nullable(n.kids.front());
  }
  return true;
}

std::bitset<128> ascii_range(char lo, char hi) {
  std::bitset<128> b;
  for (int c = lo; c <= hi; ++c) b.set(static_cast<std::size_t>(c));
  return b;
}

const std::bitset<128> kDigits = ascii_range('0', '9');
const std::bitset<128> kWord = ascii_range('0', '9') | ascii_range('A', 'Z') | ascii_range('a', 'z') |
                               ascii_range('_', '_');
const std::bitset<128> kSpace = ascii_range('\t', '\r') | ascii_range(' ', ' ');

void fold_case(std::bitset<128>& bits) {
  for (int c = 'a'; c <= 'z'; ++c) {
    const auto lower = static_cast<std::size_t>(c);
    const auto upper = static_cast<std::size_t>(c - 'a' + 'A');
    if (bits[lower] || bits[upper]) bits.set(lower).set(upper);
  }
}

class Parser {
 public:
  Parser(std::string_view src, std::vector<CharSet>& sets) : src_(src), sets_(sets) {
    if (src_.substr(0, 4) == "(?i)") {
      icase_ = true;
      pos_ = 4;
    }
  }

  Node parse() {
    Node root = parse_alt();
    if (pos_ < src_.size()) fail("unmatched ')'");
    return root;
  }

  bool icase() const noexcept { return icase_; }
  int groups() const noexcept { return groups_; }

 private:
  // One parsed class element: either a single character or a whole set
  // (from \d, \w, ...).
  struct ClassAtom {
    bool is_set = false;
    char32_t cp = 0;
    std::bitset<128> bits;
    bool non_ascii = false;
  };

  [[noreturn]] void fail(const std::string& what) const { throw SyntaxError(what, pos_, false); }
  [[noreturn]] void unsupported(const std::string& what) const { throw SyntaxError(what, pos_, true); }

  bool at_end() const noexcept { return pos_ >= src_.size(); }
  char peek() const noexcept { return src_[pos_]; }

  char32_t take_char() {
    const auto d = utf8::decode_at(src_, pos_);
    pos_ += d.length;
    return d.cp;
  }

  Node make_set(CharSet cs) {
    Node n;
    n.kind = Node::Kind::Set;
    n.set = static_cast<std::uint32_t>(sets_.size());
    sets_.push_back(std::move(cs));
    return n;
  }

  Node literal(char32_t cp) {
    CharSet cs;
    if (cp < 128) {
      cs.ascii.set(cp);
      if (icase_) fold_case(cs.ascii);
    } else {
      cs.ranges.emplace_back(cp, cp);
    }
    return make_set(std::move(cs));
  }

  Node parse_alt() {
    Node first = parse_concat();
    if (at_end() || peek() != '|') return first;
    Node alt;
    alt.kind = Node::Kind::Alt;
    alt.kids.push_back(std::move(first));
    while (!at_end() && peek() == '|') {
      ++pos_;
      alt.kids.push_back(parse_concat());
    }
    return alt;
  }

  Node parse_concat() {
    Node cat;
    cat.kind = Node::Kind::Concat;
    while (!at_end() && peek() != '|' && peek() != ')') cat.kids.push_back(parse_repeat());
    if (cat.kids.empty()) return Node{};
    if (cat.kids.size() == 1) return std::move(cat.kids.front());
    return cat;
  }

  bool parse_number(std::uint32_t& out) {
    const std::size_t begin = pos_;
    std::uint64_t v = 0;
    while (!at_end() && peek() >= '0' && peek() <= '9') {
      v = v * 10 + static_cast<std::uint64_t>(peek() - '0');
      if (v > std::numeric_limits<std::uint32_t>::max()) unsupported("repetition count too large");
      ++pos_;
    }
    out = static_cast<std::uint32_t>(v);
    return pos_ > begin;
  }

  static bool is_quantifier(char c) noexcept { return c == '*' || c == '+' || c == '?' || c == '{'; }

  Node parse_repeat() {
    Node atom = parse_atom();
    if (at_end() || !is_quantifier(peek())) return atom;
    if (atom.kind == Node::Kind::Assert) fail("nothing to repeat");

    Node rep;
    rep.kind = Node::Kind::Repeat;
    const char q = peek();
    ++pos_;
    if (q == '*') {
      rep.min = 0, rep.unbounded = true;
    } else if (q == '+') {
      rep.min = 1, rep.unbounded = true;
    } else if (q == '?') {
      rep.min = 0, rep.max = 1;
    } else {
      if (!parse_number(rep.min)) fail("malformed repetition");
      if (!at_end() && peek() == ',') {
        ++pos_;
        if (parse_number(rep.max)) {
          if (rep.max < rep.min) fail("repetition range out of order");
        } else {
          rep.unbounded = true;
        }
      } else {
        rep.max = rep.min;
      }
      if (at_end() || peek() != '}') fail("malformed repetition");
      ++pos_;
      if (rep.min > Program::kMaxRepeat || (!rep.unbounded && rep.max > Program::kMaxRepeat))
        unsupported("repetition count above " + std::to_string(Program::kMaxRepeat));
    }
    if (!at_end() && peek() == '?') {
      rep.greedy = false;
      ++pos_;
    }
    if (!at_end() && is_quantifier(peek())) fail("nothing to repeat");
    rep.kids.push_back(std::move(atom));
    return rep;
  }

  Node parse_atom() {
    const char c = peek();
    switch (c) {
      case '(':
        return parse_group();
      case '[':
        return make_set(parse_class());
      case '.': {
        ++pos_;
        CharSet cs;
        cs.ascii.set();
        cs.ascii.reset('\n').reset('\r');
        cs.ranges.emplace_back(0x2028, 0x2029);
        cs.negated = true;
        return make_set(std::move(cs));
      }
      case '^':
      case '$': {
        ++pos_;
        Node n;
        n.kind = Node::Kind::Assert;
        n.anchor = c == '^' ? Program::Anchor::TextStart : Program::Anchor::TextEnd;
        return n;
      }
      case '\\':
        return parse_escape();
      case '*':
      case '+':
      case '?':
      case '{':
        fail("nothing to repeat");
      case '}':
      case ']':
        fail(std::string("unescaped '") + c + "'");
      default:
        return literal(take_char());
    }
  }

  Node parse_group() {
    ++pos_;
    int capture = 0;
    if (!at_end() && peek() == '?') {
      if (src_.substr(pos_, 2) == "?:") {
        pos_ += 2;
      } else if (src_.substr(pos_, 2) == "?i") {
        unsupported("inline flags are only allowed as a leading (?i)");
      } else {
        unsupported("lookaround and named groups are not supported");
      }
    } else {
      capture = ++groups_;
    }
    Node inner = parse_alt();
    if (at_end() || peek() != ')') fail("missing ')'");
    ++pos_;
    if (capture == 0) return inner;
    Node n;
    n.kind = Node::Kind::Capture;
    n.capture = capture;
    n.kids.push_back(std::move(inner));
    return n;
  }

  std::uint32_t parse_hex(std::size_t digits) {
    std::uint32_t v = 0;
    for (std::size_t i = 0; i < digits; ++i) {
      if (at_end() || !std::isxdigit(static_cast<unsigned char>(peek()))) fail("malformed hex escape");
      const char h = peek();
      v = v * 16 + static_cast<std::uint32_t>(std::isdigit(static_cast<unsigned char>(h))
                                                  ? h - '0'
                                                  : std::tolower(static_cast<unsigned char>(h)) - 'a' + 10);
      ++pos_;
    }
    return v;
  }

  // Shared by class and non-class escapes. Returns false for \b and \B,
  // which the caller handles.
  bool parse_escape_atom(ClassAtom& out, bool in_class) {
    if (at_end()) fail("trailing backslash");
    const char e = peek();
    auto set_atom = [&](const std::bitset<128>& bits, bool negate) {
      ++pos_;
      out.is_set = true;
      out.bits = negate ? ~bits : bits;
      out.non_ascii = negate;
    };
    auto char_atom = [&](char32_t cp) {
      out.is_set = false;
      out.cp = cp;
    };
    switch (e) {
      case 'd': set_atom(kDigits, false); return true;
      case 'D': set_atom(kDigits, true); return true;
      case 'w': set_atom(kWord, false); return true;
      case 'W': set_atom(kWord, true); return true;
      case 's': set_atom(kSpace, false); return true;
      case 'S': set_atom(kSpace, true); return true;
      case 'n': ++pos_; char_atom('\n'); return true;
      case 'r': ++pos_; char_atom('\r'); return true;
      case 't': ++pos_; char_atom('\t'); return true;
      case 'f': ++pos_; char_atom('\f'); return true;
      case 'v': ++pos_; char_atom('\v'); return true;
      case 'x': ++pos_; char_atom(parse_hex(2)); return true;
      case 'u': ++pos_; char_atom(parse_hex(4)); return true;
      case '0':
        ++pos_;
        if (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) unsupported("octal escapes are not supported");
        char_atom(0);
        return true;
      case 'b':
      case 'B':
        if (in_class) unsupported("\\b inside a class is not supported");
        return false;
      default:
        break;
    }
    const auto uc = static_cast<unsigned char>(e);
    if (uc >= 128) {
      char_atom(take_char());
      return true;
    }
    if (std::isdigit(uc)) unsupported("backreferences are not supported");
    if (std::isalpha(uc)) unsupported(std::string("unknown escape \\") + e);
    ++pos_;
    char_atom(uc);
    return true;
  }

  Node parse_escape() {
    ++pos_;
    ClassAtom atom;
    if (!parse_escape_atom(atom, false)) {
      Node n;
      n.kind = Node::Kind::Assert;
      n.anchor = peek() == 'b' ? Program::Anchor::WordBoundary : Program::Anchor::NotWordBoundary;
      ++pos_;
      return n;
    }
    if (!atom.is_set) return literal(atom.cp);
    CharSet cs;
    cs.ascii = atom.bits;
    cs.all_non_ascii = atom.non_ascii;
    return make_set(std::move(cs));
  }

  ClassAtom parse_class_atom() {
    ClassAtom atom;
    if (peek() == '\\') {
      ++pos_;
      parse_escape_atom(atom, true);
      return atom;
    }
    if (peek() == '[') fail("unescaped '[' inside class");
    atom.cp = take_char();
    return atom;
  }

  static void add_range(CharSet& cs, char32_t lo, char32_t hi) {
    for (char32_t c = lo; c <= hi && c < 128; ++c) cs.ascii.set(c);
    if (hi >= 128) cs.ranges.emplace_back(std::max<char32_t>(lo, 128), hi);
  }

  CharSet parse_class() {
    ++pos_;
    CharSet cs;
    bool negate = false;
    if (!at_end() && peek() == '^') {
      negate = true;
      ++pos_;
    }
    if (!at_end() && peek() == ']') fail("empty character class");
    while (true) {
      if (at_end()) fail("missing ']'");
      if (peek() == ']') {
        ++pos_;
        break;
      }
      ClassAtom lo = parse_class_atom();
      const bool range = !lo.is_set && pos_ + 1 < src_.size() && peek() == '-' && src_[pos_ + 1] != ']';
      if (!range) {
        if (lo.is_set) {
          cs.ascii |= lo.bits;
          cs.all_non_ascii = cs.all_non_ascii || lo.non_ascii;
        } else {
          add_range(cs, lo.cp, lo.cp);
        }
        continue;
      }
      ++pos_;
      ClassAtom hi = parse_class_atom();
      if (hi.is_set) fail("class escape cannot end a range");
      if (hi.cp < lo.cp) fail("class range out of order");
      add_range(cs, lo.cp, hi.cp);
    }
    if (icase_) fold_case(cs.ascii);
    if (negate) {
      cs.ascii.flip();
      cs.negated = true;
    }
    return cs;
  }

  std::string_view src_;
  std::vector<CharSet>& sets_;
  std::size_t pos_ = 0;
  bool icase_ = false;
  int groups_ = 0;
};

std::size_t node_cost(const Node& n) {
  std::size_t kids = 0;
  for (const auto& k : n.kids) kids += node_cost(k);
  switch (n.kind) {
    case Node::Kind::Repeat: {
      const std::size_t copies = static_cast<std::size_t>(n.min) + (n.unbounded ? 1 : n.max - n.min);
      return copies * (kids + 2) + 1;
    }
    case Node::Kind::Alt:
      return kids + 2 * n.kids.size();
    case Node::Kind::Capture:
      return kids + 2;
    default:
      return kids + 1;
  }
}

}  // namespace

class Compiler {
 public:
  explicit Compiler(Program& prog) : prog_(prog) {}

  void emit(const Node& n) {
    auto& code = prog_.code_;
    using Op = Program::Op;
    switch (n.kind) {
      case Node::Kind::Empty:
        break;
      case Node::Kind::Set:
        code.push_back({Op::Char, n.set, 0});
        break;
      case Node::Kind::Assert:
        code.push_back({Op::Assert, static_cast<std::uint32_t>(n.anchor), 0});
        break;
      case Node::Kind::Concat:
        for (const auto& k : n.kids) emit(k);
        break;
      case Node::Kind::Capture:
        if (n.capture == 1) code.push_back({Op::Save, 0, 0});
        emit(n.kids.front());
        if (n.capture == 1) code.push_back({Op::Save, 1, 0});
        break;
      case Node::Kind::Alt: {
        std::vector<std::size_t> jumps;
        for (std::size_t i = 0; i < n.kids.size(); ++i) {
          if (i + 1 < n.kids.size()) {
            const std::size_t split = code.size();
            code.push_back({Op::Split, 0, 0});
            code[split].x = here();
            emit(n.kids[i]);
            jumps.push_back(code.size());
            code.push_back({Op::Jmp, 0, 0});
            code[split].y = here();
          } else {
            emit(n.kids[i]);
          }
        }
        for (auto j : jumps) code[j].x = here();
        break;
      }
      case Node::Kind::Repeat: {
        const Node& body = n.kids.front();
        for (std::uint32_t i = 0; i < n.min; ++i) emit(body);
        if (n.unbounded) {
          const std::size_t split = code.size();
          code.push_back({Op::Split, 0, 0});
          emit(body);
          code.push_back({Op::Jmp, static_cast<std::uint32_t>(split), 0});
          patch(split, split + 1, here(), n.greedy);
        } else {
          std::vector<std::size_t> splits;
          for (std::uint32_t i = n.min; i < n.max; ++i) {
            splits.push_back(code.size());
            code.push_back({Op::Split, 0, 0});
            emit(body);
          }
          for (auto s : splits) patch(s, s + 1, here(), n.greedy);
        }
        break;
      }
    }
  }

 private:
  std::uint32_t here() const { return static_cast<std::uint32_t>(prog_.code_.size()); }

  void patch(std::size_t split, std::size_t body, std::uint32_t exit, bool greedy) {
    auto& inst = prog_.code_[split];
    const auto b = static_cast<std::uint32_t>(body);
    inst.x = greedy ? b : exit;
    inst.y = greedy ? exit : b;
  }

  Program& prog_;
};

Program Program::compile(std::string_view source) {
  Program prog;
  Parser parser(source, prog.sets_);
  const Node root = parser.parse();
  if (node_cost(root) > kMaxInstructions) throw SyntaxError("pattern too large", 0, true);

  prog.icase_ = parser.icase();
  prog.has_capture_ = parser.groups() >= 1;
  prog.nullable_ = nullable(root);

  Compiler(prog).emit(root);
  prog.code_.push_back({Op::Match, 0, 0});

  // First symbols: every Char reachable from the entry without consuming.
  std::vector<bool> seen(prog.code_.size(), false);
  std::vector<std::uint32_t> stack{0};
  while (!stack.empty()) {
    const auto pc = stack.back();
    stack.pop_back();
    if (seen[pc]) continue;
    seen[pc] = true;
    const Inst& inst = prog.code_[pc];
    switch (inst.op) {
      case Op::Char: {
        const CharSet& cs = prog.sets_[inst.x];
        prog.first_.ascii |= cs.ascii;
        prog.first_.non_ascii = prog.first_.non_ascii || (cs.negated ? !cs.all_non_ascii : (cs.all_non_ascii || !cs.ranges.empty()));
        break;
      }
      case Op::Split:
        stack.push_back(inst.y);
        stack.push_back(inst.x);
        break;
      case Op::Jmp:
        stack.push_back(inst.x);
        break;
      case Op::Save:
      case Op::Assert:
        stack.push_back(pc + 1);
        break;
      case Op::Match:
        break;
    }
  }
  return prog;
}

bool Program::empty_language() const {
  // Reachability over (pc, consumed anything, passed '$'). Word-boundary
  // assertions are treated as satisfiable.
  const std::size_t n = code_.size();
  std::vector<bool> seen(n * 4, false);
  std::deque<std::tuple<std::uint32_t, bool, bool>> work;
  auto push = [&](std::uint32_t pc, bool consumed, bool dollar) {
    const std::size_t idx = pc * 4 + (consumed ? 2 : 0) + (dollar ? 1 : 0);
    if (!seen[idx]) {
      seen[idx] = true;
      work.emplace_back(pc, consumed, dollar);
    }
  };
  push(0, false, false);
  while (!work.empty()) {
    const auto [pc, consumed, dollar] = work.front();
    work.pop_front();
    const Inst& inst = code_[pc];
    switch (inst.op) {
      case Op::Match:
        return false;
      case Op::Char:
        if (!dollar && !sets_[inst.x].empty()) push(pc + 1, true, false);
        break;
      case Op::Split:
        push(inst.x, consumed, dollar);
        push(inst.y, consumed, dollar);
        break;
      case Op::Jmp:
        push(inst.x, consumed, dollar);
        break;
      case Op::Save:
        push(pc + 1, consumed, dollar);
        break;
      case Op::Assert:
        switch (static_cast<Anchor>(inst.x)) {
          case Anchor::TextStart:
            if (!consumed) push(pc + 1, consumed, dollar);
            break;
          case Anchor::TextEnd:
            push(pc + 1, consumed, true);
            break;
          default:
            push(pc + 1, consumed, dollar);
            break;
        }
        break;
    }
  }
  return true;
}

namespace {

constexpr std::int32_t kUnset = -1;

struct Thread {
  std::uint32_t pc;
  std::int32_t start;
  std::int32_t cap_begin;
  std::int32_t cap_end;
};

class ThreadList {
 public:
  explicit ThreadList(std::size_t capacity) : sparse_(capacity), dense_(capacity) {
    threads_.reserve(capacity);
  }

  bool insert(std::uint32_t pc) {
    const auto i = sparse_[pc];
    if (i < size_ && dense_[i] == pc) return false;
    sparse_[pc] = size_;
    dense_[size_++] = pc;
    return true;
  }

  void clear() {
    size_ = 0;
    threads_.clear();
  }

  bool empty() const noexcept { return threads_.empty(); }
  std::vector<Thread>& threads() noexcept { return threads_; }

 private:
  std::vector<std::uint32_t> sparse_;
  std::vector<std::uint32_t> dense_;
  std::uint32_t size_ = 0;
  std::vector<Thread> threads_;
};

}  // namespace

std::vector<Match> Program::scan(const Subject& subject, std::span<const std::uint32_t> starts) const {
  std::vector<Match> out;
  if (starts.empty()) return out;

  const std::size_t n = subject.size();
  auto word_at = [&](std::size_t i) { return i < n && is_word(subject.at(i)); };
  auto holds = [&](Anchor a, std::size_t pos) {
    switch (a) {
      case Anchor::TextStart:
        return pos == 0;
      case Anchor::TextEnd:
        return pos == n;
      case Anchor::WordBoundary:
        return (pos > 0 && word_at(pos - 1)) != word_at(pos);
      case Anchor::NotWordBoundary:
        return (pos > 0 && word_at(pos - 1)) == word_at(pos);
    }
    return false;
  };

  ThreadList clist(code_.size());
  ThreadList nlist(code_.size());

  // Follows epsilon edges from `pc` at position `pos`, appending runnable
  // threads in priority order.
  auto add = [&](auto&& self, ThreadList& list, std::uint32_t pc, std::size_t pos, Thread t) -> void {
    if (!list.insert(pc)) return;
    const Inst& inst = code_[pc];
    switch (inst.op) {
      case Op::Jmp:
        self(self, list, inst.x, pos, t);
        break;
      case Op::Split:
        self(self, list, inst.x, pos, t);
        self(self, list, inst.y, pos, t);
        break;
      case Op::Save:
        (inst.x == 0 ? t.cap_begin : t.cap_end) = static_cast<std::int32_t>(pos);
        self(self, list, pc + 1, pos, t);
        break;
      case Op::Assert:
        if (holds(static_cast<Anchor>(inst.x), pos)) self(self, list, pc + 1, pos, t);
        break;
      case Op::Char:
      case Op::Match:
        t.pc = pc;
        list.threads().push_back(t);
        break;
    }
  };

  std::size_t si = 0;
  std::size_t pos = 0;
  while (true) {
    while (si < starts.size() && starts[si] < pos) ++si;
    if (si == starts.size()) break;
    pos = starts[si];

    bool matched = false;
    Thread best{};
    std::size_t best_end = 0;
    clist.clear();
    while (true) {
      if (!matched && si < starts.size() && starts[si] == pos) {
        ++si;
        add(add, clist, 0, pos, Thread{0, static_cast<std::int32_t>(pos), kUnset, kUnset});
      }
      if (clist.empty()) break;
      nlist.clear();
      for (const Thread& t : clist.threads()) {
        const Inst& inst = code_[t.pc];
        if (inst.op == Op::Match) {
          matched = true;
          best = t;
          best_end = pos;
          break;  // lower-priority threads are cut
        }
        if (pos < n && sets_[inst.x].contains(subject.at(pos))) add(add, nlist, t.pc + 1, pos + 1, t);
      }
      std::swap(clist, nlist);
      if (pos == n) break;
      ++pos;
    }

    if (!matched) continue;
    Match m{};
    m.begin = subject.byte_offset(static_cast<std::size_t>(best.start));
    m.end = subject.byte_offset(best_end);
    if (best.cap_begin != kUnset && best.cap_end != kUnset && best.cap_end > best.cap_begin) {
      m.candidate_begin = subject.byte_offset(static_cast<std::size_t>(best.cap_begin));
      m.candidate_end = subject.byte_offset(static_cast<std::size_t>(best.cap_end));
    } else {
      m.candidate_begin = m.begin;
      m.candidate_end = m.end;
    }
    out.push_back(m);
    pos = best_end == static_cast<std::size_t>(best.start) ? best_end + 1 : best_end;
    si = static_cast<std::size_t>(std::lower_bound(starts.begin(), starts.end(), pos) - starts.begin());
  }
  return out;
}

std::vector<Match> Program::scan(const Subject& subject) const {
  std::vector<std::uint32_t> starts;
  for (std::size_t i = 0; i < subject.size(); ++i)
    if (first_.contains(subject.at(i))) starts.push_back(static_cast<std::uint32_t>(i));
  return scan(subject, starts);
}

}  // namespace leakwarden::pattern
