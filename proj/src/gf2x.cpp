#include "kinder/gf2x.hpp"

#include <algorithm>
#include <array>
#include <bit>

#include "kinder/arith.hpp"
#include "kinder/errors.hpp"

#if defined(__x86_64__)
#include <immintrin.h>
#endif

namespace kinder {

namespace {

constexpr std::array<std::uint16_t, 256> make_spread_table() {
  std::array<std::uint16_t, 256> t{};
  for (unsigned b = 0; b < 256; ++b) {
    std::uint16_t s = 0;
    for (unsigned i = 0; i < 8; ++i) {
      if (b & (1u << i)) s |= static_cast<std::uint16_t>(1u << (2 * i));
    }
    t[b] = s;
  }
  return t;
}
constexpr auto kSpread = make_spread_table();

std::uint64_t spread32(std::uint32_t x) {
  return std::uint64_t{kSpread[x & 0xff]} | (std::uint64_t{kSpread[(x >> 8) & 0xff]} << 16) |
         (std::uint64_t{kSpread[(x >> 16) & 0xff]} << 32) |
         (std::uint64_t{kSpread[(x >> 24) & 0xff]} << 48);
}

void clmul64_portable(std::uint64_t a, std::uint64_t b, std::uint64_t& lo, std::uint64_t& hi) {
  lo = 0;
  hi = 0;
  while (b) {
    const int i = std::countr_zero(b);
    lo ^= a << i;
    if (i) hi ^= a >> (64 - i);
    b &= b - 1;
  }
}

#if defined(__x86_64__)
__attribute__((target("pclmul,sse2"))) void clmul64_hw(std::uint64_t a, std::uint64_t b,
                                                       std::uint64_t& lo, std::uint64_t& hi) {
  const __m128i va = _mm_set_epi64x(0, static_cast<long long>(a));
  const __m128i vb = _mm_set_epi64x(0, static_cast<long long>(b));
  const __m128i r = _mm_clmulepi64_si128(va, vb, 0x00);
  lo = static_cast<std::uint64_t>(_mm_cvtsi128_si64(r));
  hi = static_cast<std::uint64_t>(_mm_cvtsi128_si64(_mm_unpackhi_epi64(r, r)));
}

bool have_pclmul() {
  static const bool ok = __builtin_cpu_supports("pclmul");
  return ok;
}
#endif

// dst ^= src << shift (bit shift), growing dst as needed.
void xor_shifted(std::vector<std::uint64_t>& dst, const std::uint64_t* src, std::size_t n,
                 std::size_t shift) {
  const std::size_t ws = shift / 64;
  const unsigned bs = shift % 64;
  const std::size_t need = n + ws + (bs ? 1 : 0);
  if (dst.size() < need) dst.resize(need, 0);
  if (bs == 0) {
    for (std::size_t i = 0; i < n; ++i) dst[i + ws] ^= src[i];
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      dst[i + ws] ^= src[i] << bs;
      dst[i + ws + 1] ^= src[i] >> (64 - bs);
    }
  }
}

// Reduction modulo x^n + (sum of x^t for t in tail).
struct Reducer {
  std::uint32_t n = 0;
  BitPoly f;
  std::vector<std::uint32_t> tail;
  bool sparse = false;

  explicit Reducer(const BitPoly& modulus) : f(modulus) {
    f.trim();
    n = static_cast<std::uint32_t>(f.degree());
    for (std::uint32_t i = 0; i < n; ++i) {
      if (f.bit(i)) tail.push_back(i);
    }
    sparse = tail.size() <= 16 && (tail.empty() || tail.back() <= n / 2);
  }

  BitPoly reduce(BitPoly a) const {
    if (!sparse) return a.mod(f);
    auto& w = a.mutable_words();
    const std::size_t low_words = (n + 63) / 64;
    std::vector<std::uint64_t> high;
    while (a.degree() >= static_cast<long>(n)) {
      // high = a >> n; a = a mod x^n
      const std::size_t total_bits = w.size() * 64;
      const std::size_t hbits = total_bits - n;
      high.assign((hbits + 63) / 64, 0);
      const std::size_t ws = n / 64;
      const unsigned bs = n % 64;
      for (std::size_t i = 0; i < high.size(); ++i) {
        const std::size_t src = i + ws;
        std::uint64_t v = src < w.size() ? w[src] >> bs : 0;
        if (bs && src + 1 < w.size()) v |= w[src + 1] << (64 - bs);
        high[i] = v;
      }
      w.resize(low_words);
      if (n % 64) w.back() &= (std::uint64_t{1} << (n % 64)) - 1;
      while (!high.empty() && high.back() == 0) high.pop_back();
      for (auto t : tail) xor_shifted(w, high.data(), high.size(), t);
    }
    w.resize(low_words);
    return a;
  }
};

}  // namespace

void clmul64(std::uint64_t a, std::uint64_t b, std::uint64_t& lo, std::uint64_t& hi) {
#if defined(__x86_64__)
  if (have_pclmul()) {
    clmul64_hw(a, b, lo, hi);
    return;
  }
#endif
  clmul64_portable(a, b, lo, hi);
}

BitPoly BitPoly::monomial(std::size_t k) {
  BitPoly r;
  r.set_bit(k);
  return r;
}

BitPoly BitPoly::from_coeffs(std::span<const std::uint32_t> coeffs) {
  BitPoly r;
  r.words_.assign((coeffs.size() + 63) / 64, 0);
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i] > 1) throw InvalidArgument("binary coefficient must be 0 or 1");
    if (coeffs[i]) r.words_[i / 64] |= std::uint64_t{1} << (i % 64);
  }
  return r;
}

BitPoly BitPoly::from_words(std::vector<std::uint64_t> words) {
  BitPoly r;
  r.words_ = std::move(words);
  return r;
}

long BitPoly::degree() const {
  for (std::size_t i = words_.size(); i-- > 0;) {
    if (words_[i]) return static_cast<long>(i * 64 + 63 - std::countl_zero(words_[i]));
  }
  return -1;
}

void BitPoly::set_bit(std::size_t i, bool value) {
  const std::size_t w = i / 64;
  if (w >= words_.size()) {
    if (!value) return;
    words_.resize(w + 1, 0);
  }
  const std::uint64_t mask = std::uint64_t{1} << (i % 64);
  if (value) {
    words_[w] |= mask;
  } else {
    words_[w] &= ~mask;
  }
}

void BitPoly::flip_bit(std::size_t i) { set_bit(i, !bit(i)); }

BitPoly& BitPoly::operator^=(const BitPoly& other) {
  if (words_.size() < other.words_.size()) words_.resize(other.words_.size(), 0);
  for (std::size_t i = 0; i < other.words_.size(); ++i) words_[i] ^= other.words_[i];
  return *this;
}

BitPoly operator*(const BitPoly& a, const BitPoly& b) {
  BitPoly r;
  const auto& aw = a.words_;
  const auto& bw = b.words_;
  if (aw.empty() || bw.empty()) return r;
  r.words_.assign(aw.size() + bw.size(), 0);
  for (std::size_t i = 0; i < aw.size(); ++i) {
    if (!aw[i]) continue;
    for (std::size_t j = 0; j < bw.size(); ++j) {
      std::uint64_t lo, hi;
      clmul64(aw[i], bw[j], lo, hi);
      r.words_[i + j] ^= lo;
      r.words_[i + j + 1] ^= hi;
    }
  }
  return r;
}

bool BitPoly::operator==(const BitPoly& other) const {
  const std::size_t n = std::max(words_.size(), other.words_.size());
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t x = i < words_.size() ? words_[i] : 0;
    const std::uint64_t y = i < other.words_.size() ? other.words_[i] : 0;
    if (x != y) return false;
  }
  return true;
}

BitPoly BitPoly::square() const {
  BitPoly r;
  r.words_.resize(2 * words_.size());
  for (std::size_t i = 0; i < words_.size(); ++i) {
    r.words_[2 * i] = spread32(static_cast<std::uint32_t>(words_[i]));
    r.words_[2 * i + 1] = spread32(static_cast<std::uint32_t>(words_[i] >> 32));
  }
  return r;
}

BitPoly BitPoly::shifted_left(std::size_t k) const {
  BitPoly r;
  xor_shifted(r.words_, words_.data(), words_.size(), k);
  return r;
}

BitPoly BitPoly::mod(const BitPoly& f) const {
  const long df = f.degree();
  if (df < 0) throw InvalidArgument("polynomial reduction by zero");
  BitPoly r = *this;
  BitPoly ft = f;
  ft.trim();
  long dr = r.degree();
  while (dr >= df) {
    xor_shifted(r.words_, ft.words_.data(), ft.words_.size(), static_cast<std::size_t>(dr - df));
    // degree strictly drops; scan down from dr
    long d = dr - 1;
    while (d >= 0 && !r.bit(static_cast<std::size_t>(d))) --d;
    dr = d;
  }
  r.words_.resize(static_cast<std::size_t>(std::max<long>(df, 1) + 63) / 64, 0);
  return r;
}

BitPoly BitPoly::gcd(BitPoly a, BitPoly b) {
  a.trim();
  b.trim();
  while (!b.is_zero()) {
    BitPoly r = a.mod(b);
    r.trim();
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

std::vector<std::uint32_t> BitPoly::coeffs(std::size_t len) const {
  std::vector<std::uint32_t> c(len, 0);
  for (std::size_t i = 0; i < len; ++i) c[i] = bit(i) ? 1 : 0;
  return c;
}

void BitPoly::trim() {
  while (!words_.empty() && words_.back() == 0) words_.pop_back();
}

bool is_irreducible_gf2(const BitPoly& f_in) {
  BitPoly f = f_in;
  f.trim();
  const long n = f.degree();
  if (n < 1) return false;
  if (n == 1) return true;
  if (!f.bit(0)) return false;
  // f(1) = 0 means x + 1 divides f
  std::size_t weight = 0;
  for (auto w : f.words()) weight += static_cast<std::size_t>(std::popcount(w));
  if (weight % 2 == 0) return false;

  const Reducer red(f);
  const auto prime_divisors = factorize(static_cast<std::uint64_t>(n)).factors;
  std::vector<std::uint64_t> checkpoints;
  for (const auto& [r, _] : prime_divisors) checkpoints.push_back(static_cast<std::uint64_t>(n) / r);

  const BitPoly x = BitPoly::monomial(1);
  BitPoly cur = x;
  for (std::uint64_t step = 1; step <= static_cast<std::uint64_t>(n); ++step) {
    cur = red.reduce(cur.square());
    if (std::find(checkpoints.begin(), checkpoints.end(), step) != checkpoints.end()) {
      BitPoly h = cur ^ x;
      BitPoly g = BitPoly::gcd(f, h);
      if (g.degree() != 0) return false;
    }
  }
  BitPoly diff = cur ^ x;
  return diff.is_zero();
}

BitPoly smallest_irreducible_gf2(std::uint32_t n) {
  if (n == 0) throw InvalidArgument("degree must be at least 1");
  if (n == 1) return BitPoly::monomial(1);
  // Tails must be odd (constant term 1) and, with x^n added, give odd
  // total weight; walk them in increasing integer order.
  for (std::uint64_t tail = 1;; tail += 2) {
    if (n < 64 && tail >= (std::uint64_t{1} << n)) break;
    if (std::popcount(tail) % 2 == 1) continue;
    BitPoly f = BitPoly::from_words({tail});
    f.set_bit(n);
    if (is_irreducible_gf2(f)) return f;
  }
  throw PropertyViolation("no irreducible polynomial found");
}

BinaryFieldPtr BinaryField::make(std::uint32_t degree, const std::optional<Poly>& modulus) {
  if (degree == 0) throw InvalidArgument("field degree must be at least 1");
  auto field = std::shared_ptr<BinaryField>(new BinaryField());
  field->n_ = degree;
  field->words_ = (degree + 63) / 64;
  if (modulus) {
    if (modulus->size() != degree + 1 || modulus->back() != 1) {
      throw InvalidArgument("modulus must be monic of degree " + std::to_string(degree));
    }
    field->modulus_ = BitPoly::from_coeffs(*modulus);
    if (!is_irreducible_gf2(field->modulus_)) throw InvalidArgument("modulus is reducible");
  } else {
    field->modulus_ = smallest_irreducible_gf2(degree);
  }
  field->modulus_.trim();
  const Reducer red(field->modulus_);
  field->tail_ = red.tail;
  field->sparse_ = red.sparse;

  if (degree <= 64) {
    const std::uint64_t group_order =
        degree == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << degree) - 1;
    if (group_order == 1) {
      field->primitive_ = field->one();
    } else {
      const auto primes = factorize(group_order).factors;
      // Walk candidates 2, 3, ... as integer codes.
      for (std::uint64_t code = 2; code <= group_order; ++code) {
        Elem g = field->reduce(BitPoly::from_words({code}));
        bool ok = true;
        for (const auto& [r, _] : primes) {
          if (field->pow(g, BigInt(group_order / r)) == field->one()) {
            ok = false;
            break;
          }
        }
        if (ok) {
          field->primitive_ = g;
          break;
        }
      }
    }
  }
  return field;
}

Poly BinaryField::modulus_coeffs() const { return modulus_.coeffs(n_ + 1); }

void BinaryField::normalize(Elem& a) const { a.resize_words(words_); }

BinaryField::Elem BinaryField::zero() const {
  Elem r;
  normalize(r);
  return r;
}

BinaryField::Elem BinaryField::one() const {
  Elem r = BitPoly::monomial(0);
  normalize(r);
  return r;
}

BinaryField::Elem BinaryField::x() const { return reduce(BitPoly::monomial(1)); }

BinaryField::Elem BinaryField::reduce(BitPoly a) const {
  if (a.degree() < static_cast<long>(n_)) {
    normalize(a);
    return a;
  }
  if (sparse_) {
    Reducer red(modulus_);
    BitPoly r = red.reduce(std::move(a));
    normalize(r);
    return r;
  }
  BitPoly r = a.mod(modulus_);
  normalize(r);
  return r;
}

BinaryField::Elem BinaryField::add(const Elem& a, const Elem& b) const {
  Elem r = a ^ b;
  normalize(r);
  return r;
}

BinaryField::Elem BinaryField::mul(const Elem& a, const Elem& b) const { return reduce(a * b); }

BinaryField::Elem BinaryField::square(const Elem& a) const { return reduce(a.square()); }

BinaryField::Elem BinaryField::pow2k(const Elem& a, std::uint64_t k) const {
  Elem r = a;
  normalize(r);
  for (std::uint64_t i = 0; i < k % n_; ++i) r = square(r);
  return r;
}

BinaryField::Elem BinaryField::pow(const Elem& a, const BigInt& exponent) const {
  if (exponent < 0) return pow(inv(a), -exponent);
  Elem result = one();
  const std::size_t bits = exponent == 0 ? 0 : boost::multiprecision::msb(exponent) + 1;
  for (std::size_t i = bits; i-- > 0;) {
    result = square(result);
    if (boost::multiprecision::bit_test(exponent, static_cast<unsigned>(i))) result = mul(result, a);
  }
  return result;
}

BinaryField::Elem BinaryField::inv(const Elem& a) const {
  if (a.is_zero()) throw InvalidArgument("inversion of zero");
  // a^(2^n - 2) = prod_{i=1}^{n-1} a^(2^i)
  Elem result = one();
  Elem t = a;
  for (std::uint32_t i = 1; i < n_; ++i) {
    t = square(t);
    result = mul(result, t);
  }
  return result;
}

std::uint32_t BinaryField::trace(const Elem& a) const {
  Elem t = zero();
  Elem cur = a;
  normalize(cur);
  for (std::uint32_t i = 0; i < n_; ++i) {
    t = add(t, cur);
    cur = square(cur);
  }
  if (t.degree() > 0) throw PropertyViolation("trace left the prime field");
  return t.bit(0) ? 1 : 0;
}

std::vector<std::uint32_t> BinaryField::to_vector(const Elem& a) const { return a.coeffs(n_); }

BinaryField::Elem BinaryField::from_vector(std::span<const std::uint32_t> v) const {
  if (v.size() != n_) {
    throw InvalidArgument("coordinate vector has length " + std::to_string(v.size()) +
                          ", expected " + std::to_string(n_));
  }
  Elem r = BitPoly::from_coeffs(v);
  normalize(r);
  return r;
}

std::string BinaryField::to_hex(const Elem& a) const {
  static constexpr char kDigits[] = "0123456789abcdef";
  const std::size_t digits = (n_ + 3) / 4;
  std::string s(digits, '0');
  for (std::size_t d = 0; d < digits; ++d) {
    unsigned v = 0;
    for (unsigned b = 0; b < 4; ++b) {
      if (a.bit(4 * d + b)) v |= 1u << b;
    }
    s[digits - 1 - d] = kDigits[v];
  }
  return s;
}

BinaryField::Elem BinaryField::from_hex(const std::string& hex) const {
  const std::size_t digits = (n_ + 3) / 4;
  if (hex.size() != digits) {
    throw MalformedInput("hex element has " + std::to_string(hex.size()) + " digits, expected " +
                         std::to_string(digits));
  }
  Elem r = zero();
  for (std::size_t d = 0; d < digits; ++d) {
    const char c = hex[digits - 1 - d];
    unsigned v;
    if (c >= '0' && c <= '9') {
      v = static_cast<unsigned>(c - '0');
    } else if (c >= 'a' && c <= 'f') {
      v = static_cast<unsigned>(c - 'a' + 10);
    } else if (c >= 'A' && c <= 'F') {
      v = static_cast<unsigned>(c - 'A' + 10);
    } else {
      throw MalformedInput(std::string("invalid hex digit '") + c + "'");
    }
    for (unsigned b = 0; b < 4; ++b) {
      if (v & (1u << b)) {
        if (4 * d + b >= n_) throw MalformedInput("hex element exceeds field degree");
        r.set_bit(4 * d + b);
      }
    }
  }
  return r;
}

}  // namespace kinder
