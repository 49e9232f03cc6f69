#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

// Tokenizer rules (version 1):
//  * word tokens are maximal runs of letters/digits, with apostrophes and
//    hyphens kept only when they sit between two letters/digits;
//  * ASCII and Latin-1 letters are lowercased, nothing else is touched;
//  * every other non-space character is a punctuation token;
//  * a sentence ends at a run of . ! ? (optionally followed by closing
//    quotes/brackets) that is followed by whitespace or end of text.
//    Abbreviations are not special-cased.
namespace essaylens::textproc {

inline constexpr int kTokenizerVersion = 1;

struct SentenceRange {
  std::size_t begin = 0;  ///< index of first word token
  std::size_t end = 0;    ///< one past the last word token
  std::size_t size() const { return end - begin; }
  bool operator==(const SentenceRange&) const = default;
};

struct TokenStream {
  std::vector<std::string> tokens;  ///< lowercased word tokens
  std::vector<SentenceRange> sentences;
  std::size_t raw_token_count = 0;  ///< words + punctuation tokens
  std::size_t punctuation_count = 0;

  std::size_t word_count() const { return tokens.size(); }
  bool operator==(const TokenStream&) const = default;
};

TokenStream tokenize(std::string_view text);

/// Number of word tokens, the single source of truth for essay length.
std::size_t word_count(std::string_view text);

/// Raw text of each sentence, trimmed, split on the same boundaries as
/// tokenize(). Sentences without any word token are dropped.
std::vector<std::string> split_sentences(std::string_view text);

/// Vowel-group heuristic: groups of [aeiouy], minus a silent trailing 'e'
/// (kept for consonant + "le"), never below 1. Pure-digit tokens count 1.
int count_syllables(std::string_view word);

/// Number of Unicode code points in a UTF-8 string.
std::size_t codepoint_length(std::string_view utf8);

}  // namespace essaylens::textproc
