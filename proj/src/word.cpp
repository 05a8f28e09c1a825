#include "repstab/word.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>

namespace repstab {

namespace {

std::atomic<std::size_t> g_cap = [] {
  if (const char* env = std::getenv("REPSTAB_CAP")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && v > 0) return static_cast<std::size_t>(v);
  }
  return static_cast<std::size_t>(5'000'000);
}();

void check_rank_compatible(const ReducedWord& a, const ReducedWord& b) {
  if (a.rank != b.rank) throw std::invalid_argument("rank mismatch between words");
}

}  // namespace

std::size_t global_cap() { return g_cap.load(); }
void set_global_cap(std::size_t cap) { g_cap.store(cap); }

bool word_less(const ReducedWord& a, const ReducedWord& b) {
  if (a.length() != b.length()) return a.length() < b.length();
  for (std::size_t i = 0; i < a.length(); ++i) {
    int ra = letter_rank(a.letters[i]);
    int rb = letter_rank(b.letters[i]);
    if (ra != rb) return ra < rb;
  }
  return false;
}

ReducedWord identity_word(int rank) { return ReducedWord{{}, rank}; }

ReducedWord single_letter(Letter l, int rank) {
  if (l == 0 || std::abs(l) > rank) throw std::invalid_argument("letter index out of range");
  return ReducedWord{{l}, rank};
}

ReducedWord reduce(const std::vector<Letter>& raw, int rank) {
  ReducedWord out;
  out.rank = rank;
  out.letters.reserve(raw.size());
  for (Letter l : raw) {
    if (l == 0 || std::abs(l) > rank)
      throw std::invalid_argument("letter index out of range [1.." + std::to_string(rank) + "]");
    if (!out.letters.empty() && out.letters.back() == -l)
      out.letters.pop_back();
    else
      out.letters.push_back(l);
  }
  return out;
}

ReducedWord inverse(const ReducedWord& w) {
  ReducedWord out;
  out.rank = w.rank;
  out.letters.reserve(w.length());
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) out.letters.push_back(-*it);
  return out;
}

ReducedWord concat(const ReducedWord& u, const ReducedWord& v) {
  check_rank_compatible(u, v);
  ReducedWord out = u;
  for (Letter l : v.letters) {
    if (!out.letters.empty() && out.letters.back() == -l)
      out.letters.pop_back();
    else
      out.letters.push_back(l);
  }
  return out;
}

ReducedWord power(const ReducedWord& w, long long n) {
  if (n < 0) return power(inverse(w), -n);
  ReducedWord out = identity_word(w.rank);
  for (long long i = 0; i < n; ++i) {
    out = concat(out, w);
    if (out.length() > global_cap()) throw CapExceeded("word length cap exceeded in power()");
  }
  return out;
}

ReducedWord conjugate(const ReducedWord& g, const ReducedWord& w) {
  return concat(concat(g, w), inverse(g));
}

std::int64_t word_distance(const ReducedWord& x, const ReducedWord& y) {
  check_rank_compatible(x, y);
  // |x^-1 y| = |x| + |y| - 2 * (common prefix length).
  std::size_t p = 0;
  while (p < x.length() && p < y.length() && x.letters[p] == y.letters[p]) ++p;
  return static_cast<std::int64_t>(x.length() + y.length() - 2 * p);
}

CyclicWord cyclic_reduce(const ReducedWord& w) {
  std::size_t i = 0;
  std::size_t j = w.length();
  while (j >= i + 2 && w.letters[i] == -w.letters[j - 1]) {
    ++i;
    --j;
  }
  CyclicWord out;
  out.conjugator.rank = w.rank;
  out.conjugator.letters.assign(w.letters.begin(), w.letters.begin() + i);
  out.core.rank = w.rank;
  out.core.letters.assign(w.letters.begin() + i, w.letters.begin() + j);
  return out;
}

std::int64_t conjugacy_length(const ReducedWord& w) {
  return static_cast<std::int64_t>(cyclic_reduce(w).core.length());
}

ReducedWord conjugacy_key(const ReducedWord& w) {
  ReducedWord core = cyclic_reduce(w).core;
  if (core.length() <= 1) return core;
  ReducedWord best = core;
  ReducedWord rot = core;
  for (std::size_t i = 1; i < core.length(); ++i) {
    std::rotate(rot.letters.begin(), rot.letters.begin() + 1, rot.letters.end());
    if (word_less(rot, best)) best = rot;
  }
  return best;
}

HalfInt gromov_product(const ReducedWord& x, const ReducedWord& y, const ReducedWord& w) {
  return HalfInt(word_distance(x, w) + word_distance(y, w) - word_distance(x, y));
}

std::vector<ReducedWord> geodesic(const ReducedWord& x, const ReducedWord& y) {
  std::size_t p = 0;
  while (p < x.length() && p < y.length() && x.letters[p] == y.letters[p]) ++p;
  std::vector<ReducedWord> path;
  path.reserve(x.length() - p + y.length() - p + 1);
  for (std::size_t n = x.length(); n > p; --n) {
    ReducedWord v{std::vector<Letter>(x.letters.begin(), x.letters.begin() + n), x.rank};
    path.push_back(std::move(v));
  }
  for (std::size_t n = p; n <= y.length(); ++n) {
    ReducedWord v{std::vector<Letter>(y.letters.begin(), y.letters.begin() + n), y.rank};
    path.push_back(std::move(v));
  }
  return path;
}

std::uint64_t ball_size(int rank, int radius) {
  // 1 + sum_{n=1..r} 2k (2k-1)^(n-1)
  std::uint64_t total = 1;
  std::uint64_t sphere = 2ull * rank;
  for (int n = 1; n <= radius; ++n) {
    total += sphere;
    sphere *= (2ull * rank - 1);
  }
  return total;
}

std::vector<ReducedWord> enumerate_ball(int rank, int radius, std::size_t cap) {
  if (rank < 1) throw std::invalid_argument("rank must be >= 1");
  if (radius < 0) throw std::invalid_argument("radius must be >= 0");
  if (ball_size(rank, radius) > cap)
    throw CapExceeded("ball of radius " + std::to_string(radius) + " in F_" +
                      std::to_string(rank) + " exceeds cap " + std::to_string(cap));

  std::vector<Letter> letters_in_order;
  for (int i = 1; i <= rank; ++i) {
    letters_in_order.push_back(i);
    letters_in_order.push_back(-i);
  }

  std::vector<ReducedWord> ball;
  ball.push_back(identity_word(rank));
  std::size_t sphere_begin = 0;
  for (int n = 1; n <= radius; ++n) {
    std::size_t sphere_end = ball.size();
    for (std::size_t i = sphere_begin; i < sphere_end; ++i) {
      for (Letter l : letters_in_order) {
        if (!ball[i].letters.empty() && ball[i].letters.back() == -l) continue;
        ReducedWord child = ball[i];
        child.letters.push_back(l);
        ball.push_back(std::move(child));
      }
    }
    sphere_begin = sphere_end;
  }
  return ball;
}

ReducedWord parse_word(std::string_view text, int rank) {
  if (text == "1") return identity_word(rank);  // identity literal
  std::vector<Letter> raw;
  raw.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    Letter l = 0;
    if (c >= 'a' && c <= 'z')
      l = c - 'a' + 1;
    else if (c >= 'A' && c <= 'Z')
      l = -(c - 'A' + 1);
    else
      throw std::invalid_argument("invalid character '" + std::string(1, c) +
                                  "' at position " + std::to_string(i));
    if (std::abs(l) > rank)
      throw std::invalid_argument("letter '" + std::string(1, c) + "' at position " +
                                  std::to_string(i) + " exceeds rank " + std::to_string(rank));
    raw.push_back(l);
  }
  return reduce(raw, rank);
}

std::string format_word(const ReducedWord& w) {
  if (w.is_identity()) return "1";
  std::string out;
  out.reserve(w.length());
  for (Letter l : w.letters)
    out.push_back(l > 0 ? static_cast<char>('a' + l - 1) : static_cast<char>('A' - l - 1));
  return out;
}

}  // namespace repstab
