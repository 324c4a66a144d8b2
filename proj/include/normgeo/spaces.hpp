#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace normgeo {

using vec = std::vector<double>;

/// Malformed input: bad exponent, dimension mismatch, unsupported space for an
/// operation, non-unit vector where the sphere is required, unknown ids.
struct input_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Structurally valid input outside an operation's mathematical domain
/// (zero vector where a direction is needed, zero operator, ...).
struct domain_error : std::domain_error {
  using std::domain_error::domain_error;
};

/// Extended norm exponent: 1, a finite value in (1, inf), or infinity.
/// Infinity is a tag, never a large float; always branch on the tag.
class PExp {
 public:
  PExp() = default;  // p = 2
  static PExp one() { return PExp(1.0, false); }
  static PExp inf() { return PExp(0.0, true); }
  static PExp finite(double p);  // requires 1 <= p < inf

  bool is_inf() const { return inf_; }
  bool is_one() const { return !inf_ && p_ == 1.0; }
  bool is_smooth() const { return !inf_ && p_ > 1.0; }  // 1 < p < inf
  double value() const;  // finite exponents only

  friend bool operator==(const PExp& a, const PExp& b) {
    return a.inf_ == b.inf_ && (a.inf_ || a.p_ == b.p_);
  }

 private:
  PExp(double p, bool inf) : p_(p), inf_(inf) {}
  double p_ = 2.0;
  bool inf_ = false;
};

/// A finite-dimensional real normed space: an lp leaf, an l1-sum of two
/// subspaces (norm = sum of child norms), or a max-product (norm = max).
/// Immutable value type; composites share their children.
class Space {
 public:
  enum class Kind { lp, sum1, prodmax };

  static Space lp(PExp p, int n);
  static Space lp(double p, int n) { return lp(PExp::finite(p), n); }
  static Space lp_inf(int n) { return lp(PExp::inf(), n); }
  static Space sum1(Space left, Space right);
  static Space prodmax(Space left, Space right);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  bool is_lp() const { return kind_ == Kind::lp; }
  bool is_composite() const { return kind_ != Kind::lp; }

  PExp p() const;            // lp leaves only
  const Space& left() const;   // composites only
  const Space& right() const;

  std::string describe() const;  // compact human-readable form, e.g. lp:inf:4

 private:
  Space() = default;
  Kind kind_ = Kind::lp;
  PExp p_;
  int dim_ = 0;
  std::shared_ptr<const Space> left_, right_;
};

/// Norm of v in s. Throws input_error on dimension mismatch.
double norm(const Space& s, std::span<const double> v);

/// Semi-inner product [x, y] on lp^n, 1 < p < inf:
/// [x, y] = ||y||^(2-p) * sum_i x_i y_i |y_i|^(p-2), with |t|^(p-2) * 0 := 0.
/// Computed via sgn(y_i)|y_i|^(p-1), which is stable for all p > 1.
/// Throws domain_error if y = 0, input_error for p outside (1, inf).
double sip_lp(std::span<const double> x, std::span<const double> y, double p);

/// Deterministic rng: splitmix64 stream with Box-Muller gaussians.
/// Identical seeds give identical streams on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next_u64();
  double uniform();                      // [0, 1)
  double uniform(double a, double b);    // [a, b)
  int uniform_int(int n);                // {0, ..., n-1}
  double gaussian();
  /// Fixed stream-splitting rule used for partitioned trial parallelism.
  static std::uint64_t split(std::uint64_t seed, std::uint64_t stream);

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// `count` unit vectors of s, seeded and reproducible. Gaussian directions
/// normalized in the target norm; with probability 1/4 a leaf first gets a
/// degenerate move that lands the sample on a non-smooth part of the sphere
/// (tied maximal coordinates for p = inf, zeroed coordinates for p = 1), and
/// composites occasionally zero one summand (sum1) or tie child norms
/// (prodmax). Every returned v has | ||v|| - 1 | <= 1e-12.
std::vector<vec> sphere_sample(const Space& s, std::uint64_t seed, int count);

/// One norm-one supporting functional at z != 0: f(z) = ||z||, ||f||_* = 1.
/// Coordinates are in the standard dual pairing.
vec support_functional(const Space& s, std::span<const double> z);

/// Maximizer of a linear functional f over the unit sphere of s, with the
/// attained value (the dual norm of f). For f = 0 returns (e_1, 0).
std::pair<vec, double> dual_maximizer(const Space& s, std::span<const double> f);

/// Dual norm of f on s.
double dual_norm(const Space& s, std::span<const double> f);

// Small shared helpers.

inline double sgn(double t) { return t > 0 ? 1.0 : (t < 0 ? -1.0 : 0.0); }

/// Indices of the maximal-magnitude coordinates of x in the sup norm,
/// with the relative tie tolerance used across the library:
/// i is in M(x) iff |x_i| >= ||x||_inf * (1 - 1e-11).
std::vector<int> max_index_set(std::span<const double> x);

/// Support of x under the relative zero test used for l1 formulas:
/// x_i is treated as nonzero iff |x_i| > 1e-12 * ||x||_inf.
bool effectively_zero(double xi, double scale);

}  // namespace normgeo
