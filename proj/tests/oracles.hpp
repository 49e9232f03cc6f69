#pragma once

// Slow, direct re-implementations of the stylometric measures used as test
// oracles. Nothing here calls into the library's stylometry code.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace oracle {

inline std::size_t count_of(const std::vector<std::string>& w, const std::string& t) {
  return std::size_t(std::count(w.begin(), w.end(), t));
}

inline std::size_t types(const std::vector<std::string>& w) { return std::set<std::string>(w.begin(), w.end()).size(); }

inline double ttr(const std::vector<std::string>& w) { return double(types(w)) / double(w.size()); }

inline double maas(const std::vector<std::string>& w) {
  const double n = double(w.size()), v = double(types(w));
  return (std::log(n) - std::log(v)) / (std::log(n) * std::log(n));
}

// One pass: the running segment is rebuilt from scratch at every step.
inline double mtld_pass(const std::vector<std::string>& w, double thr = 0.72) {
  double factors = 0;
  std::size_t full = 0, start = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    std::vector<std::string> seg(w.begin() + std::ptrdiff_t(start), w.begin() + std::ptrdiff_t(i) + 1);
    if (ttr(seg) < thr) {
      factors += 1;
      ++full;
      start = i + 1;
    }
  }
  if (full == 0) return double(w.size());
  if (start < w.size()) {
    std::vector<std::string> rest(w.begin() + std::ptrdiff_t(start), w.end());
    factors += (1 - ttr(rest)) / (1 - thr);
  }
  return double(w.size()) / factors;
}

inline double mtld(const std::vector<std::string>& w) {
  std::vector<std::string> r(w.rbegin(), w.rend());
  return (mtld_pass(w) + mtld_pass(r)) / 2;
}

inline double log_choose(double n, double k) {
  return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1);
}

// Closed form through log-gamma rather than a running product.
inline double hdd(const std::vector<std::string>& w, std::size_t s = 42) {
  const double n = double(w.size());
  double sum = 0;
  for (const auto& t : std::set<std::string>(w.begin(), w.end())) {
    const double f = double(count_of(w, t));
    const double absent = (n - f < double(s)) ? 0.0 : std::exp(log_choose(n - f, double(s)) - log_choose(n, double(s)));
    sum += (1 - absent) / double(s);
  }
  return 100 * sum;
}

// Monte Carlo: draw samples without replacement, count distinct types.
inline double hdd_monte_carlo(const std::vector<std::string>& w, std::size_t draws, std::uint64_t seed,
                              std::size_t s = 42) {
  std::map<std::string, int> id;
  std::vector<int> codes;
  for (const auto& t : w) codes.push_back(id.emplace(t, int(id.size())).first->second);
  std::mt19937_64 rng(seed);
  std::vector<int> pool = codes;
  std::vector<char> seen(id.size());
  double total = 0;
  for (std::size_t d = 0; d < draws; ++d) {
    std::fill(seen.begin(), seen.end(), 0);
    std::size_t distinct = 0;
    // partial Fisher-Yates
    for (std::size_t i = 0; i < s; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
      std::swap(pool[i], pool[pick(rng)]);
      if (!seen[std::size_t(pool[i])]) {
        seen[std::size_t(pool[i])] = 1;
        ++distinct;
      }
    }
    total += double(distinct);
  }
  return 100 * total / double(draws) / double(s);
}

inline double yules_k(const std::vector<std::string>& w) {
  const double n = double(w.size());
  double s2 = 0;
  for (const auto& t : std::set<std::string>(w.begin(), w.end())) {
    const double m = double(count_of(w, t));
    s2 += m * m;
  }
  return 1e4 * (s2 - n) / (n * n);
}

inline int syllables(const std::string& word) {
  std::string w;
  for (char c : word) w.push_back(char(std::tolower(static_cast<unsigned char>(c))));
  if (!w.empty() && std::all_of(w.begin(), w.end(), [](char c) { return c >= '0' && c <= '9'; })) return 1;
  auto vowel = [](char c) { return std::string("aeiouy").find(c) != std::string::npos; };
  int g = 0;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (vowel(w[i]) && (i == 0 || !vowel(w[i - 1]))) ++g;
  const auto n = w.size();
  if (n > 0 && w.back() == 'e') {
    const bool keep = n >= 3 && w[n - 2] == 'l' && std::isalpha(static_cast<unsigned char>(w[n - 3])) && !vowel(w[n - 3]);
    if (!keep) --g;
  }
  return g < 1 ? 1 : g;
}

inline std::size_t codepoints(const std::string& s) {
  std::size_t n = 0;
  for (unsigned char c : s) n += (c & 0xC0) != 0x80;
  return n;
}

inline double complexity(const std::vector<std::string>& w, std::size_t sentences) {
  double syl = 0;
  for (const auto& t : w) syl += syllables(t);
  const double n = double(w.size());
  return 1 - (206.835 - 1.015 * (n / double(sentences)) - 84.6 * (syl / n));
}

/// Fixed toy texts: hand-written snippets plus seeded word salads, all long
/// enough (>= 42 words) for every measure.
inline std::vector<std::string> toy_texts() {
  std::vector<std::string> out{
      "The cat sat on the mat. The dog sat on the log! Did the bird sit on the branch? No, the bird flew away "
      "over the hills and far away, and the cat and the dog watched it go until the sky was empty again.",
      "I don't know if re-entering the race was wise. My coach said it was; my mother said it wasn't. In 2023 I "
      "ran three races, won one, lost two, and learned more from the losses than the win ever taught me. "
      "That's the truth.",
      "Caf\xc3\xa9 mornings taught me patience. The espresso machine hissed, the regulars argued about football, "
      "and I wiped tables while memorizing chemistry formulas. Every table had a story; every story had a "
      "stain. I learned to read both. Some days the stains won, and some days I did.",
      "Science fascinates me because questions never end. Why does ice float? Why do leaves turn red? Each answer "
      "opens another door, and each door leads to a longer hallway full of stranger rooms and brighter lamps. I want "
      "to walk every one of those hallways before I am done.",
      "one two three four five six seven eight nine ten eleven twelve thirteen fourteen fifteen sixteen seventeen "
      "eighteen nineteen twenty twentyone twentytwo twentythree twentyfour twentyfive twentysix twentyseven "
      "twentyeight twentynine thirty thirtyone thirtytwo thirtythree thirtyfour thirtyfive thirtysix thirtyseven "
      "thirtyeight thirtynine forty fortyone fortytwo.",
  };
  std::string same;
  for (int i = 0; i < 50; ++i) same += i % 10 == 9 ? "echo. " : "echo ";
  out.push_back(same);
  const std::vector<std::string> vocab{"the",   "and",    "of",      "to",     "community", "leadership", "learn",
                                       "grow",  "family", "my",      "was",    "challenge", "opportunity", "i",
                                       "a",     "school", "friends", "beautiful", "quiet",  "through",    "little",
                                       "table", "people", "simple",  "strength", "journey", "rhythm",     "every"};
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 18; ++t) {
    std::uniform_int_distribution<std::size_t> len(45, 220), pick(0, vocab.size() - 1 - std::size_t(t % 5) * 4),
        sent(4, 16);
    const auto n = len(rng);
    std::string s;
    std::size_t until = sent(rng);
    for (std::size_t i = 0; i < n; ++i) {
      s += vocab[pick(rng)];
      if (--until == 0 || i + 1 == n) {
        s += (i % 3 == 0) ? "! " : ". ";
        until = sent(rng);
      } else {
        s += (i % 11 == 5) ? ", " : " ";
      }
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace oracle
