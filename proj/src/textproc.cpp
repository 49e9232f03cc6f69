#include "essaylens/textproc.hpp"

#include <algorithm>
#include <cstdint>

namespace essaylens::textproc {

namespace {

enum class CharClass { Space, Word, Apostrophe, Hyphen, Terminator, Closer, Punct };

struct Decoded {
  char32_t cp;
  std::size_t len;
};

// Lenient UTF-8 decode: malformed bytes decode as themselves, length 1.
Decoded decode(std::string_view s, std::size_t i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) return {b0, 1};
  auto cont = [&](std::size_t k) {
    return i + k < s.size() && (static_cast<unsigned char>(s[i + k]) & 0xC0) == 0x80;
  };
  auto bits = [&](std::size_t k) { return static_cast<char32_t>(static_cast<unsigned char>(s[i + k]) & 0x3F); };
  if ((b0 & 0xE0) == 0xC0 && cont(1)) return {((b0 & 0x1Fu) << 6) | bits(1), 2};
  if ((b0 & 0xF0) == 0xE0 && cont(1) && cont(2)) return {((b0 & 0x0Fu) << 12) | (bits(1) << 6) | bits(2), 3};
  if ((b0 & 0xF8) == 0xF0 && cont(1) && cont(2) && cont(3))
    return {((b0 & 0x07u) << 18) | (bits(1) << 12) | (bits(2) << 6) | bits(3), 4};
  return {b0, 1};
}

CharClass classify(char32_t c) {
  if (c < 0x80) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') return CharClass::Space;
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9')) return CharClass::Word;
    if (c == '\'') return CharClass::Apostrophe;
    if (c == '-') return CharClass::Hyphen;
    if (c == '.' || c == '!' || c == '?') return CharClass::Terminator;
    if (c == '"' || c == ')' || c == ']') return CharClass::Closer;
    return CharClass::Punct;
  }
  if (c == 0x00A0 || (c >= 0x2000 && c <= 0x200B) || c == 0x2028 || c == 0x2029 || c == 0x3000)
    return CharClass::Space;
  if (c == 0x2019 || c == 0x2018) return CharClass::Apostrophe;
  if (c == 0x2010 || c == 0x2011) return CharClass::Hyphen;
  if (c == 0x201D) return CharClass::Closer;
  if ((c >= 0x00A1 && c <= 0x00BF) || c == 0x00D7 || c == 0x00F7 || (c >= 0x2012 && c <= 0x206F) ||
      (c >= 0x3001 && c <= 0x303F))
    return CharClass::Punct;
  return CharClass::Word;
}

bool is_word_char_at(std::string_view s, std::size_t i) {
  return i < s.size() && classify(decode(s, i).cp) == CharClass::Word;
}

void append_utf8(std::string& out, char32_t c) {
  if (c < 0x80) {
    out.push_back(static_cast<char>(c));
  } else if (c < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (c >> 6)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else if (c < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (c >> 12)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (c >> 18)));
    out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  }
}

char32_t to_lower(char32_t c) {
  if (c >= 'A' && c <= 'Z') return c + 32;
  if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 32;
  return c;
}

// Single scanner shared by tokenize() and split_sentences().
struct Scan {
  TokenStream stream;
  std::vector<std::pair<std::size_t, std::size_t>> sentence_bytes;  // [begin, end) byte spans
};

Scan scan(std::string_view s) {
  Scan out;
  auto& ts = out.stream;
  std::size_t sentence_start_word = 0;
  std::size_t sentence_start_byte = std::string_view::npos;
  std::size_t last_content_end = 0;

  auto close_sentence = [&](std::size_t end_byte) {
    if (ts.tokens.size() > sentence_start_word) {
      ts.sentences.push_back({sentence_start_word, ts.tokens.size()});
      out.sentence_bytes.emplace_back(sentence_start_byte, end_byte);
    }
    sentence_start_word = ts.tokens.size();
    sentence_start_byte = std::string_view::npos;
  };

  std::size_t i = 0;
  while (i < s.size()) {
    const auto [cp, len] = decode(s, i);
    const CharClass cls = classify(cp);
    if (cls == CharClass::Space) {
      i += len;
      continue;
    }
    if (sentence_start_byte == std::string_view::npos) sentence_start_byte = i;

    if (cls == CharClass::Word) {
      std::string word;
      while (i < s.size()) {
        const auto d = decode(s, i);
        const CharClass c = classify(d.cp);
        if (c == CharClass::Word) {
          append_utf8(word, to_lower(d.cp));
          i += d.len;
        } else if ((c == CharClass::Apostrophe || c == CharClass::Hyphen) && is_word_char_at(s, i + d.len)) {
          word.push_back(c == CharClass::Apostrophe ? '\'' : '-');
          i += d.len;
        } else {
          break;
        }
      }
      ts.tokens.push_back(std::move(word));
      ++ts.raw_token_count;
      last_content_end = i;
      continue;
    }

    if (cls == CharClass::Terminator) {
      std::size_t j = i;
      std::size_t marks = 0;
      while (j < s.size() && classify(decode(s, j).cp) == CharClass::Terminator) {
        j += decode(s, j).len;
        ++marks;
      }
      std::size_t k = j;
      std::size_t closers = 0;
      while (k < s.size()) {
        const auto d = decode(s, k);
        const CharClass c = classify(d.cp);
        if (c != CharClass::Closer && c != CharClass::Apostrophe) break;
        k += d.len;
        ++closers;
      }
      ts.raw_token_count += marks + closers;
      ts.punctuation_count += marks + closers;
      last_content_end = k;
      const bool at_boundary = k >= s.size() || classify(decode(s, k).cp) == CharClass::Space;
      i = k;
      if (at_boundary) close_sentence(k);
      continue;
    }

    ++ts.raw_token_count;
    ++ts.punctuation_count;
    i += len;
    last_content_end = i;
  }
  close_sentence(last_content_end);
  return out;
}

bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
}

bool is_ascii_letter(char c) { return (c >= 'a' && c <= 'z'); }

}  // namespace

TokenStream tokenize(std::string_view text) { return scan(text).stream; }

std::size_t word_count(std::string_view text) { return scan(text).stream.tokens.size(); }

std::vector<std::string> split_sentences(std::string_view text) {
  const Scan sc = scan(text);
  std::vector<std::string> out;
  out.reserve(sc.sentence_bytes.size());
  for (const auto& [b, e] : sc.sentence_bytes) out.emplace_back(text.substr(b, e - b));
  return out;
}

int count_syllables(std::string_view word) {
  std::string w;
  w.reserve(word.size());
  bool all_digits = !word.empty();
  for (char c : word) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c + 32);
    if (!(c >= '0' && c <= '9')) all_digits = false;
    w.push_back(c);
  }
  if (all_digits) return 1;

  int groups = 0;
  bool in_group = false;
  for (char c : w) {
    const bool v = is_vowel(c);
    if (v && !in_group) ++groups;
    in_group = v;
  }
  const std::size_t n = w.size();
  if (n >= 1 && w[n - 1] == 'e') {
    const bool consonant_le =
        n >= 3 && w[n - 2] == 'l' && is_ascii_letter(w[n - 3]) && !is_vowel(w[n - 3]);
    if (!consonant_le) --groups;
  }
  return std::max(groups, 1);
}

std::size_t codepoint_length(std::string_view utf8) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < utf8.size(); i += decode(utf8, i).len) ++n;
  return n;
}

}  // namespace essaylens::textproc
