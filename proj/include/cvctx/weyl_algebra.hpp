#pragma once

// Exact algebra of phase-tracked displacement (Weyl) operators on two
// canonical modes (x1, p1), (x2, p2).
//
// Every generator is a real linear form in x1, x2, p1, p2 whose coefficients
// are exact rationals in canonical units: x coefficients count multiples of
// p0, p coefficients count multiples of pi*hbar/p0. A common symbolic scale
// (q * pi^a * hbar^b * p0^c) lets the same type hold bare coordinates such as
// x1 or the mixed combinations V1, W1. Phases are rational multiples
// of pi. No floating point is involved in any identity certified here.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace cvctx::weyl {

using Rational = boost::rational<std::int64_t>;

/// "p/q", or "p" when q == 1.
std::string to_string(const Rational& r);

// Comparisons against plain int literals recurse inside boost::rational under
// C++20's rewritten operators; use these instead.
inline bool is_zero(const Rational& r) { return r.numerator() == 0; }
inline bool is_integer(const Rational& r) { return r.denominator() == 1; }

/// Reduce a phase given in units of pi into [0, 2).
Rational reduce_phase(const Rational& phase_over_pi);

struct UnitSystem {
  double hbar = 1.0;
  double p0 = 1.0;

  /// Throws std::invalid_argument unless hbar > 0 and p0 > 0.
  void validate() const;
};

/// Symbolic scalar q * pi^pi_pow * hbar^hbar_pow * p0^p0_pow.
struct Monomial {
  Rational coeff{1};
  int pi_pow = 0;
  int hbar_pow = 0;
  int p0_pow = 0;

  static Monomial one() { return {}; }
  static Monomial rational(Rational q) { return {q, 0, 0, 0}; }

  bool dimensionless_rational() const { return pi_pow == 0 && hbar_pow == 0 && p0_pow == 0; }
  bool same_units(const Monomial& o) const {
    return pi_pow == o.pi_pow && hbar_pow == o.hbar_pow && p0_pow == o.p0_pow;
  }
  double evaluate(const UnitSystem& units) const;

  friend Monomial operator*(const Monomial& a, const Monomial& b);
  friend Monomial operator/(const Monomial& a, const Monomial& b);
  friend bool operator==(const Monomial& a, const Monomial& b) = default;
};

std::string to_string(const Monomial& m);

/// Index into canonical coefficient arrays.
enum Coordinate : int { kX1 = 0, kX2 = 1, kP1 = 2, kP2 = 3 };

class LinearForm {
 public:
  LinearForm() = default;

  /// A form with action units: cx1*p0*x1 + cx2*p0*x2 + cp1*(pi hbar/p0)*p1 + cp2*(pi hbar/p0)*p2.
  static LinearForm action(Rational cx1, Rational cx2, Rational cp1, Rational cp2);

  static LinearForm x1();
  static LinearForm x2();
  static LinearForm p1();
  static LinearForm p2();

  /// Canonical rational coefficients (x1, x2, p1, p2), to be read together with scale().
  const std::array<Rational, 4>& coefficients() const { return coeffs_; }
  const Rational& coefficient(Coordinate c) const { return coeffs_[c]; }

  /// Unit-bearing common factor; its rational part is always 1 (folded into coefficients).
  const Monomial& scale() const { return scale_; }

  /// True when the form has dimensions of action, i.e. exp(i F / hbar) is a Weyl operator.
  bool is_action() const { return scale_.dimensionless_rational(); }
  bool is_zero() const;

  /// Physical coefficients on (x1, x2, p1, p2) for the given units.
  std::array<double, 4> physical(const UnitSystem& units) const;

  LinearForm scaled(const Monomial& factor) const;
  LinearForm scaled(const Rational& factor) const { return scaled(Monomial::rational(factor)); }

  /// Throws std::invalid_argument when the two forms carry different unit scales.
  friend LinearForm operator+(const LinearForm& f, const LinearForm& g);
  friend LinearForm operator-(const LinearForm& f, const LinearForm& g);
  friend LinearForm operator-(const LinearForm& f);
  friend bool operator==(const LinearForm& f, const LinearForm& g);

 private:
  LinearForm(std::array<Rational, 4> coeffs, Monomial scale);

  std::array<Rational, 4> coeffs_{};
  Monomial scale_{};
};

std::string to_string(const LinearForm& f);

/// Rational symplectic pairing in canonical units: sum_i cx_i(f) cp_i(g) - cp_i(f) cx_i(g).
Rational symplectic_pairing(const LinearForm& f, const LinearForm& g);

/// s with [F, G] = i hbar s, exact and symbolic in the units.
Monomial symplectic_commutator(const LinearForm& f, const LinearForm& g);

/// exp(i pi phase) * exp(i F / hbar), with the generator F an action-valued form.
class WeylOp {
 public:
  WeylOp() = default;
  /// Throws std::invalid_argument when the generator is not action-valued.
  explicit WeylOp(LinearForm generator, Rational phase_over_pi = Rational{0});

  static WeylOp identity() { return {}; }

  const LinearForm& generator() const { return generator_; }
  /// Phase in units of pi, always in [0, 2).
  const Rational& phase_over_pi() const { return phase_; }

  bool is_scalar() const { return generator_.is_zero(); }

  WeylOp adjoint() const;

  friend bool operator==(const WeylOp& u, const WeylOp& v) = default;

 private:
  LinearForm generator_{};
  Rational phase_{0};
};

/// u * v normalised to single-exponential form via BCH (central commutator).
WeylOp weyl_compose(const WeylOp& u, const WeylOp& v);
inline WeylOp operator*(const WeylOp& u, const WeylOp& v) { return weyl_compose(u, v); }

/// delta / pi in [0, 2) with u v = exp(i delta) v u.
Rational commutator_phase(const WeylOp& u, const WeylOp& v);

// --- The nine complex modular observables and six contexts -------------------

enum class ObservableId : int { A = 0, B, C, a, b, c, alpha, beta, gamma };
inline constexpr int kObservableCount = 9;
inline constexpr std::array<ObservableId, kObservableCount> kAllObservables{
    ObservableId::A, ObservableId::B, ObservableId::C,     ObservableId::a,    ObservableId::b,
    ObservableId::c, ObservableId::alpha, ObservableId::beta, ObservableId::gamma};

std::string_view name(ObservableId id);
/// Parses "A", "alpha", ... ; throws std::invalid_argument on unknown names.
ObservableId parse_observable(std::string_view text);

/// Real/imaginary split U = U' + i U''. Each observable is written as
/// U' = cos(theta), U'' = sign * sin(theta) for a fixed argument theta, so
/// U = exp(i * sign * theta). C'' and a'' carry the minus sign, for example.
struct RealSplit {
  LinearForm theta;   ///< action-valued argument (theta = F / hbar)
  int imaginary_sign; ///< +1 or -1, the sign in front of sin(theta)
};
RealSplit real_split(ObservableId id);

/// Name of the primed (cos) or double-primed (sin) real observable, e.g. "C''".
std::string real_name(ObservableId id, bool double_primed);

enum class ContextId : int { ABC = 0, abc, alpha_beta_gamma, Aa_alpha, Bb_beta, Cc_gamma };
inline constexpr int kContextCount = 6;
inline constexpr std::array<ContextId, kContextCount> kAllContexts{
    ContextId::ABC,      ContextId::abc,     ContextId::alpha_beta_gamma,
    ContextId::Aa_alpha, ContextId::Bb_beta, ContextId::Cc_gamma};

std::string_view name(ContextId ctx);
ContextId parse_context(std::string_view text);
/// The three members in the order they are written in the inequality.
std::array<ObservableId, 3> members(ContextId ctx);
/// +1 for the five positive contexts, -1 for Cc-gamma.
int sign(ContextId ctx);

class ObservableTable {
 public:
  const WeylOp& operator[](ObservableId id) const { return ops_[static_cast<int>(id)]; }
  WeylOp& operator[](ObservableId id) { return ops_[static_cast<int>(id)]; }
  const UnitSystem& units() const { return units_; }

 private:
  friend ObservableTable observable_table(const UnitSystem& units);
  std::array<WeylOp, kObservableCount> ops_{};
  UnitSystem units_{};
};

ObservableTable observable_table(const UnitSystem& units = {});

/// Product of the context's members in written order.
WeylOp context_product(ContextId ctx, const ObservableTable& table);
WeylOp context_product(ContextId ctx, const UnitSystem& units = {});

using CompatibilityMatrix = std::array<std::array<Rational, kObservableCount>, kObservableCount>;
CompatibilityMatrix compatibility_matrix(const ObservableTable& table);
CompatibilityMatrix compatibility_matrix(const UnitSystem& units = {});

struct ContextCertificate {
  ContextId context;
  WeylOp product;
  bool generator_zero = false;
  bool phase_matches_sign = false;
  bool members_commute = false;
  bool ok() const { return generator_zero && phase_matches_sign && members_commute; }
};

std::array<ContextCertificate, kContextCount> certify_contexts(const ObservableTable& table);

// CSV emitters. Phase columns are exact fractions of pi.
void write_compatibility_csv(std::ostream& os, const CompatibilityMatrix& m);
/// One 36-row block per context over its six real observables.
void write_context_blocks_csv(std::ostream& os, const ObservableTable& table);
void write_context_products_csv(std::ostream& os,
                                const std::array<ContextCertificate, kContextCount>& certs);

}  // namespace cvctx::weyl
