#include "leakwarden/utf8.hpp"

namespace leakwarden::utf8 {

namespace {

constexpr char32_t kReplacement = 0xFFFD;

bool is_continuation(unsigned char c) noexcept { return (c & 0xC0) == 0x80; }

}  // namespace

Decoded decode_at(std::string_view text, std::size_t offset) noexcept {
  const auto b0 = static_cast<unsigned char>(text[offset]);
  if (b0 < 0x80) return {b0, 1};

  std::size_t need = 0;
  char32_t cp = 0;
  char32_t min = 0;
  if ((b0 & 0xE0) == 0xC0) {
    need = 1, cp = b0 & 0x1F, min = 0x80;
  } else if ((b0 & 0xF0) == 0xE0) {
    need = 2, cp = b0 & 0x0F, min = 0x800;
  } else if ((b0 & 0xF8) == 0xF0) {
    need = 3, cp = b0 & 0x07, min = 0x10000;
  } else {
    return {kReplacement, 1};
  }
  if (offset + need >= text.size()) return {kReplacement, 1};
  for (std::size_t i = 1; i <= need; ++i) {
    const auto b = static_cast<unsigned char>(text[offset + i]);
    if (!is_continuation(b)) return {kReplacement, 1};
    cp = (cp << 6) | (b & 0x3F);
  }
  if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return {kReplacement, 1};
  return {cp, static_cast<std::uint8_t>(need + 1)};
}

std::vector<std::size_t> char_offsets(std::string_view text) {
  std::vector<std::size_t> offsets;
  offsets.reserve(text.size() + 1);
  for (std::size_t i = 0; i < text.size(); i += decode_at(text, i).length) offsets.push_back(i);
  offsets.push_back(text.size());
  return offsets;
}

std::size_t count_chars(std::string_view text) noexcept {
  std::size_t n = 0;
  for (std::size_t i = 0; i < text.size(); i += decode_at(text, i).length) ++n;
  return n;
}

bool is_char_boundary(std::string_view text, std::size_t offset) noexcept {
  if (offset == 0 || offset == text.size()) return true;
  if (offset > text.size()) return false;
  // Walk back to the nearest lead byte and see whether decoding lands here.
  std::size_t start = offset;
  for (int k = 0; k < 4 && start > 0 && is_continuation(static_cast<unsigned char>(text[start])); ++k)
    --start;
  while (start < offset) start += decode_at(text, start).length;
  return start == offset;
}

std::size_t retreat(std::string_view text, std::size_t offset, std::size_t chars) noexcept {
  while (chars > 0 && offset > 0) {
    std::size_t prev = offset - 1;
    // Candidate lead byte within the last four bytes that decodes to exactly
    // reach `offset`; otherwise the byte stands alone.
    for (std::size_t back = 2; back <= 4 && back <= offset; ++back) {
      const std::size_t at = offset - back;
      if (!is_continuation(static_cast<unsigned char>(text[at]))) {
        if (at + decode_at(text, at).length == offset) prev = at;
        break;
      }
    }
    offset = prev;
    --chars;
  }
  return offset;
}

std::size_t advance(std::string_view text, std::size_t offset, std::size_t chars) noexcept {
  while (chars > 0 && offset < text.size()) {
    offset += decode_at(text, offset).length;
    --chars;
  }
  return offset;
}

void append(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

}  // namespace leakwarden::utf8
