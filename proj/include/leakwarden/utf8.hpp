#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace leakwarden::utf8 {

// Decoded scalar value and the number of bytes it occupied. Malformed input
// decodes one byte at a time as U+FFFD so every byte belongs to exactly one
// character and offsets stay monotone.
struct Decoded {
  char32_t cp;
  std::uint8_t length;
};

Decoded decode_at(std::string_view text, std::size_t offset) noexcept;

// Byte offset of every character start, plus text.size() as the final entry.
std::vector<std::size_t> char_offsets(std::string_view text);

std::size_t count_chars(std::string_view text) noexcept;

// Byte offset reached after stepping back `chars` characters from `offset`
// (clamped at 0).
std::size_t retreat(std::string_view text, std::size_t offset, std::size_t chars) noexcept;

// Byte offset reached after stepping forward `chars` characters from `offset`
// (clamped at text.size()).
std::size_t advance(std::string_view text, std::size_t offset, std::size_t chars) noexcept;

bool is_char_boundary(std::string_view text, std::size_t offset) noexcept;

void append(std::string& out, char32_t cp);

}  // namespace leakwarden::utf8
