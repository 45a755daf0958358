#include "kinder/gf.hpp"

#include <algorithm>
#include <sstream>

#include "kinder/arith.hpp"
#include "kinder/errors.hpp"

namespace kinder {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d <= n / d; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

namespace poly {

Poly trim(Poly a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
  return a;
}

int degree(const Poly& a) {
  for (std::size_t i = a.size(); i-- > 0;) {
    if (a[i] != 0) return static_cast<int>(i);
  }
  return -1;
}

Poly add(const Poly& a, const Poly& b, std::uint32_t p) {
  Poly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] % p;
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = (r[i] + b[i]) % p;
  return trim(std::move(r));
}

Poly sub(const Poly& a, const Poly& b, std::uint32_t p) {
  Poly nb(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) nb[i] = (p - b[i] % p) % p;
  return add(a, nb, p);
}

Poly mul(const Poly& a, const Poly& b, std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  std::vector<std::uint64_t> acc(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      acc[i + j] = (acc[i + j] + std::uint64_t{a[i]} * b[j]) % p;
    }
  }
  Poly r(acc.begin(), acc.end());
  return trim(std::move(r));
}

namespace {
std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
  // p prime, a != 0
  std::uint64_t result = 1;
  std::uint64_t base = a % p;
  std::uint64_t k = p - 2;
  while (k) {
    if (k & 1) result = result * base % p;
    base = base * base % p;
    k >>= 1;
  }
  return static_cast<std::uint32_t>(result);
}
}  // namespace

Poly mod(const Poly& a, const Poly& f, std::uint32_t p) {
  Poly r = trim(a);
  const int df = degree(f);
  if (df < 0) throw InvalidArgument("polynomial reduction by zero");
  const std::uint32_t lead_inv = inv_mod(f[df], p);
  while (degree(r) >= df) {
    const int dr = degree(r);
    const std::uint64_t c = std::uint64_t{r[dr]} * lead_inv % p;
    const int shift = dr - df;
    for (int i = 0; i <= df; ++i) {
      const std::uint64_t sub = c * f[i] % p;
      r[i + shift] = static_cast<std::uint32_t>((r[i + shift] + p - sub) % p);
    }
    r = trim(std::move(r));
  }
  return r;
}

Poly gcd(Poly a, Poly b, std::uint32_t p) {
  a = trim(std::move(a));
  b = trim(std::move(b));
  while (!b.empty()) {
    Poly r = mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    const std::uint32_t li = inv_mod(a.back(), p);
    for (auto& c : a) c = static_cast<std::uint32_t>(std::uint64_t{c} * li % p);
  }
  return a;
}

Poly powmod(const Poly& base, std::uint64_t exponent, const Poly& f, std::uint32_t p) {
  Poly result{1};
  Poly b = mod(base, f, p);
  while (exponent) {
    if (exponent & 1) result = mod(mul(result, b, p), f, p);
    b = mod(mul(b, b, p), f, p);
    exponent >>= 1;
  }
  return mod(result, f, p);
}

namespace {
// x^(p^k) mod f by k successive p-th powers.
Poly frobenius_power_of_x(std::uint32_t k, const Poly& f, std::uint32_t p) {
  Poly r = mod(Poly{0, 1}, f, p);
  for (std::uint32_t i = 0; i < k; ++i) r = powmod(r, p, f, p);
  return r;
}
}  // namespace

bool is_irreducible(const Poly& f_in, std::uint32_t p) {
  const Poly f = trim(f_in);
  const int n = degree(f);
  if (n < 1) return false;
  if (n == 1) return true;
  if (f[0] == 0) return false;
  const Poly x{0, 1};
  if (sub(frobenius_power_of_x(static_cast<std::uint32_t>(n), f, p), mod(x, f, p), p).size() != 0) {
    return false;
  }
  for (const auto& [r, _] : factorize(static_cast<std::uint64_t>(n)).factors) {
    const Poly h = sub(frobenius_power_of_x(static_cast<std::uint32_t>(n / r), f, p), x, p);
    if (degree(gcd(h, f, p)) != 0) return false;
  }
  return true;
}

Poly smallest_irreducible(std::uint32_t p, std::uint32_t e) {
  if (e == 0) throw InvalidArgument("degree must be at least 1");
  for (std::uint64_t tail = 0;; ++tail) {
    Poly f(e + 1, 0);
    std::uint64_t t = tail;
    for (std::uint32_t i = 0; i < e; ++i) {
      f[i] = static_cast<std::uint32_t>(t % p);
      t /= p;
    }
    if (t != 0) throw PropertyViolation("no irreducible polynomial found");
    f[e] = 1;
    if (is_irreducible(f, p)) return f;
  }
}

}  // namespace poly

FieldPtr Field::make(std::uint32_t p, std::uint32_t e, const std::optional<Poly>& modulus) {
  if (!is_prime(p)) throw InvalidArgument("field characteristic " + std::to_string(p) + " is not prime");
  if (e == 0) throw InvalidArgument("field degree must be at least 1");
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < e; ++i) {
    q *= p;
    if (q > kMaxOrder) {
      throw InvalidArgument("field order exceeds " + std::to_string(kMaxOrder) +
                            "; use BinaryField for large binary fields");
    }
  }
  Poly f;
  if (modulus) {
    f = *modulus;
    for (auto c : f) {
      if (c >= p) throw InvalidArgument("modulus coefficient not reduced mod p");
    }
    if (f.size() != e + 1 || f.back() != 1) {
      throw InvalidArgument("modulus must be monic of degree " + std::to_string(e));
    }
    if (!poly::is_irreducible(f, p)) throw InvalidArgument("modulus is reducible");
  } else {
    f = poly::smallest_irreducible(p, e);
  }

  auto field = std::shared_ptr<Field>(new Field());
  field->p_ = p;
  field->e_ = e;
  field->q_ = static_cast<std::uint32_t>(q);
  field->modulus_ = f;

  field->neg_.resize(q);
  for (Elem a = 0; a < q; ++a) {
    auto v = field->to_vector(a);
    for (auto& c : v) c = (p - c) % p;
    field->neg_[a] = field->from_vector(v);
  }
  if (p != 2 && q <= 1024) {
    field->add_table_.resize(q * q);
    for (Elem a = 0; a < q; ++a) {
      for (Elem b = 0; b < q; ++b) {
        field->add_table_[a * q + b] = static_cast<std::uint16_t>(field->digit_add(a, b));
      }
    }
  }

  // Smallest code of multiplicative order q - 1.
  const std::uint32_t group_order = static_cast<std::uint32_t>(q - 1);
  Elem primitive = 0;
  if (q == 2) {
    primitive = 1;
  } else {
    const auto prime_factors = factorize(group_order).factors;
    for (Elem g = 2; g < q && primitive == 0; ++g) {
      bool ok = true;
      for (const auto& [r, _] : prime_factors) {
        Elem acc = 1;
        Elem base = g;
        std::uint64_t k = group_order / r;
        while (k) {
          if (k & 1) acc = field->slow_mul(acc, base);
          base = field->slow_mul(base, base);
          k >>= 1;
        }
        if (acc == 1) {
          ok = false;
          break;
        }
      }
      if (ok) primitive = g;
    }
    if (primitive == 0) throw PropertyViolation("no primitive element found");
  }
  field->primitive_ = primitive;
  field->exp_.resize(2 * std::size_t{group_order});
  field->log_.assign(q, 0);
  Elem acc = 1;
  for (std::uint32_t k = 0; k < group_order; ++k) {
    field->exp_[k] = acc;
    field->exp_[k + group_order] = acc;
    field->log_[acc] = k;
    acc = field->slow_mul(acc, primitive);
  }
  if (acc != 1) throw PropertyViolation("primitive element has wrong order");
  return field;
}

FieldPtr Field::of_order(std::uint64_t q) {
  if (q < 2) throw InvalidArgument("field order must be at least 2");
  const auto f = factorize(q);
  if (f.factors.size() != 1) throw InvalidArgument(std::to_string(q) + " is not a prime power");
  return make(static_cast<std::uint32_t>(f.factors[0].first), f.factors[0].second);
}

Field::Elem Field::generator() const {
  if (e_ == 1) return from_int(-static_cast<std::int64_t>(modulus_[0]));
  return p_;
}

Field::Elem Field::digit_add(Elem a, Elem b) const {
  Elem r = 0;
  Elem place = 1;
  for (std::uint32_t i = 0; i < e_; ++i) {
    r += ((a % p_ + b % p_) % p_) * place;
    a /= p_;
    b /= p_;
    place *= p_;
  }
  return r;
}

Field::Elem Field::add(Elem a, Elem b) const {
  if (p_ == 2) return a ^ b;
  if (!add_table_.empty()) return add_table_[a * q_ + b];
  return digit_add(a, b);
}

Field::Elem Field::slow_mul(Elem a, Elem b) const {
  Poly pa = to_vector(a);
  Poly pb = to_vector(b);
  Poly r = poly::mod(poly::mul(pa, pb, p_), modulus_, p_);
  r.resize(e_, 0);
  return from_vector(r);
}

Field::Elem Field::inv(Elem a) const {
  if (a == 0) throw InvalidArgument("inversion of zero");
  return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
}

Field::Elem Field::pow(Elem a, std::int64_t exponent) const {
  if (a == 0) {
    if (exponent == 0) return 1;
    if (exponent < 0) throw InvalidArgument("inversion of zero");
    return 0;
  }
  const std::int64_t n = q_ - 1;
  std::int64_t k = (static_cast<std::int64_t>(log_[a]) * (exponent % n)) % n;
  if (k < 0) k += n;
  return exp_[static_cast<std::size_t>(k)];
}

Field::Elem Field::frobenius(Elem a, std::uint32_t i) const {
  if (a == 0) return 0;
  std::uint64_t power = 1;
  const std::uint64_t n = q_ - 1;
  for (std::uint32_t j = 0; j < i % e_; ++j) power = power * p_ % n;
  return exp_[(std::uint64_t{log_[a]} * power) % n];
}

std::uint32_t Field::trace(Elem a) const {
  Elem t = 0;
  for (std::uint32_t i = 0; i < e_; ++i) t = add(t, frobenius(a, i));
  if (t >= p_) throw PropertyViolation("trace left the prime field");
  return t;
}

Field::Elem Field::from_int(std::int64_t v) const {
  std::int64_t r = v % static_cast<std::int64_t>(p_);
  if (r < 0) r += p_;
  return static_cast<Elem>(r);
}

std::uint32_t Field::log(Elem a) const {
  if (a == 0) throw InvalidArgument("log of zero");
  return log_[a];
}

std::uint32_t Field::multiplicative_order(Elem a) const {
  if (a == 0) throw InvalidArgument("zero has no multiplicative order");
  const std::uint32_t n = q_ - 1;
  const std::uint32_t l = log_[a];
  std::uint32_t g = n;
  std::uint32_t x = l;
  while (x) {
    const std::uint32_t t = g % x;
    g = x;
    x = t;
  }
  return n / g;
}

std::vector<std::uint32_t> Field::to_vector(Elem a) const {
  std::vector<std::uint32_t> v(e_);
  for (std::uint32_t i = 0; i < e_; ++i) {
    v[i] = a % p_;
    a /= p_;
  }
  return v;
}

Field::Elem Field::from_vector(std::span<const std::uint32_t> v) const {
  if (v.size() != e_) {
    throw InvalidArgument("coordinate vector has length " + std::to_string(v.size()) +
                          ", expected " + std::to_string(e_));
  }
  Elem r = 0;
  for (std::size_t i = e_; i-- > 0;) {
    if (v[i] >= p_) throw InvalidArgument("coordinate not reduced mod p");
    r = r * p_ + v[i];
  }
  return r;
}

bool Field::operator==(const Field& other) const {
  return p_ == other.p_ && e_ == other.e_ && modulus_ == other.modulus_;
}

bool same_field(const Field& a, const Field& b) { return &a == &b || a == b; }

std::string Field::describe() const {
  std::ostringstream os;
  os << "F_" << q_ << " (p=" << p_ << ", e=" << e_ << ")";
  return os.str();
}

}  // namespace kinder
