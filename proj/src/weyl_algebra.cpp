#include "cvctx/weyl_algebra.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace cvctx::weyl {

std::string to_string(const Rational& r) {
  std::ostringstream os;
  os << r.numerator();
  if (r.denominator() != 1) os << '/' << r.denominator();
  return os.str();
}

Rational reduce_phase(const Rational& phase_over_pi) {
  // floor division on the rational; denominators are always positive.
  const std::int64_t num = phase_over_pi.numerator();
  const std::int64_t den = phase_over_pi.denominator();
  const std::int64_t period = 2 * den;
  std::int64_t r = num % period;
  if (r < 0) r += period;
  return Rational{r, den};
}

void UnitSystem::validate() const {
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw std::invalid_argument("hbar must be positive");
  if (!(p0 > 0.0) || !std::isfinite(p0)) throw std::invalid_argument("p0 must be positive");
}

double Monomial::evaluate(const UnitSystem& units) const {
  return boost::rational_cast<double>(coeff) * std::pow(std::numbers::pi, pi_pow) *
         std::pow(units.hbar, hbar_pow) * std::pow(units.p0, p0_pow);
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  return {a.coeff * b.coeff, a.pi_pow + b.pi_pow, a.hbar_pow + b.hbar_pow, a.p0_pow + b.p0_pow};
}

Monomial operator/(const Monomial& a, const Monomial& b) {
  if (is_zero(b.coeff)) throw std::domain_error("division by zero monomial");
  return {a.coeff / b.coeff, a.pi_pow - b.pi_pow, a.hbar_pow - b.hbar_pow, a.p0_pow - b.p0_pow};
}

std::string to_string(const Monomial& m) {
  std::ostringstream os;
  os << to_string(m.coeff);
  auto factor = [&os](const char* sym, int pow) {
    if (pow == 0) return;
    os << '*' << sym;
    if (pow != 1) os << '^' << pow;
  };
  factor("pi", m.pi_pow);
  factor("hbar", m.hbar_pow);
  factor("p0", m.p0_pow);
  return os.str();
}

// --- LinearForm ---------------------------------------------------------------

LinearForm::LinearForm(std::array<Rational, 4> coeffs, Monomial scale)
    : coeffs_(coeffs), scale_(scale) {
  // keep the scale's rational part at 1 so equal forms compare equal
  const Rational q = scale_.coeff;
  if (weyl::is_zero(q)) {
    coeffs_ = {};
    scale_ = Monomial::one();
    return;
  }
  for (auto& c : coeffs_) c *= q;
  scale_.coeff = 1;
  if (is_zero()) scale_ = Monomial::one();
}

LinearForm LinearForm::action(Rational cx1, Rational cx2, Rational cp1, Rational cp2) {
  return LinearForm({cx1, cx2, cp1, cp2}, Monomial::one());
}

// x_i = (1/p0) * (p0 x_i)
LinearForm LinearForm::x1() { return LinearForm({1, 0, 0, 0}, Monomial{1, 0, 0, -1}); }
LinearForm LinearForm::x2() { return LinearForm({0, 1, 0, 0}, Monomial{1, 0, 0, -1}); }
// p_i = (p0 / (pi hbar)) * ((pi hbar / p0) p_i)
LinearForm LinearForm::p1() { return LinearForm({0, 0, 1, 0}, Monomial{1, -1, -1, 1}); }
LinearForm LinearForm::p2() { return LinearForm({0, 0, 0, 1}, Monomial{1, -1, -1, 1}); }

bool LinearForm::is_zero() const {
  for (const auto& c : coeffs_)
    if (!weyl::is_zero(c)) return false;
  return true;
}

std::array<double, 4> LinearForm::physical(const UnitSystem& units) const {
  const double s = scale_.evaluate(units);
  const double x_unit = units.p0;
  const double p_unit = std::numbers::pi * units.hbar / units.p0;
  std::array<double, 4> out{};
  for (int i = 0; i < 4; ++i) {
    const double unit = i < 2 ? x_unit : p_unit;
    out[i] = boost::rational_cast<double>(coeffs_[i]) * unit * s;
  }
  return out;
}

LinearForm LinearForm::scaled(const Monomial& factor) const {
  return LinearForm(coeffs_, scale_ * factor);
}

LinearForm operator+(const LinearForm& f, const LinearForm& g) {
  if (f.is_zero()) return g;
  if (g.is_zero()) return f;
  if (!f.scale_.same_units(g.scale_))
    throw std::invalid_argument("cannot add linear forms with different units: " +
                                to_string(f.scale_) + " vs " + to_string(g.scale_));
  std::array<Rational, 4> sum{};
  for (int i = 0; i < 4; ++i) sum[i] = f.coeffs_[i] + g.coeffs_[i];
  return LinearForm(sum, f.scale_);
}

LinearForm operator-(const LinearForm& f) { return f.scaled(Rational{-1}); }
LinearForm operator-(const LinearForm& f, const LinearForm& g) { return f + (-g); }

bool operator==(const LinearForm& f, const LinearForm& g) {
  return f.coeffs_ == g.coeffs_ && f.scale_ == g.scale_;
}

std::string to_string(const LinearForm& f) {
  static constexpr const char* kSym[4] = {"p0*x1", "p0*x2", "(pi*hbar/p0)*p1", "(pi*hbar/p0)*p2"};
  std::ostringstream os;
  os << '(' << to_string(f.scale()) << ")*[";
  bool first = true;
  for (int i = 0; i < 4; ++i) {
    const auto& c = f.coefficients()[i];
    if (is_zero(c)) continue;
    if (!first) os << " + ";
    os << to_string(c) << '*' << kSym[i];
    first = false;
  }
  if (first) os << '0';
  os << ']';
  return os.str();
}

Rational symplectic_pairing(const LinearForm& f, const LinearForm& g) {
  const auto& a = f.coefficients();
  const auto& b = g.coefficients();
  return a[kX1] * b[kP1] - a[kP1] * b[kX1] + a[kX2] * b[kP2] - a[kP2] * b[kX2];
}

Monomial symplectic_commutator(const LinearForm& f, const LinearForm& g) {
  // [cx p0 x, cp (pi hbar / p0) p] = i hbar * (pi hbar) * cx * cp
  const Rational omega = symplectic_pairing(f, g);
  if (is_zero(omega)) return Monomial::rational(0);
  return f.scale() * g.scale() * Monomial{omega, 1, 1, 0};
}

// --- WeylOp -------------------------------------------------------------------

WeylOp::WeylOp(LinearForm generator, Rational phase_over_pi)
    : generator_(std::move(generator)), phase_(reduce_phase(phase_over_pi)) {
  if (!generator_.is_action())
    throw std::invalid_argument("Weyl generator must have units of action, got " +
                                to_string(generator_));
}

WeylOp WeylOp::adjoint() const { return WeylOp(-generator_, -phase_); }

WeylOp weyl_compose(const WeylOp& u, const WeylOp& v) {
  // e^{X} e^{Y} = e^{X+Y} e^{[X,Y]/2} with X = iF/hbar, Y = iG/hbar and
  // [X,Y] = -i s/hbar = -i pi omega.
  const Rational omega = symplectic_pairing(u.generator(), v.generator());
  return WeylOp(u.generator() + v.generator(),
                u.phase_over_pi() + v.phase_over_pi() - omega / 2);
}

Rational commutator_phase(const WeylOp& u, const WeylOp& v) {
  return reduce_phase(-symplectic_pairing(u.generator(), v.generator()));
}

// --- Observables and contexts ---------------------------------------------------

namespace {

constexpr std::array<std::string_view, kObservableCount> kObservableNames{
    "A", "B", "C", "a", "b", "c", "alpha", "beta", "gamma"};
constexpr std::array<std::string_view, kContextCount> kContextNames{
    "ABC", "abc", "alpha-beta-gamma", "Aa-alpha", "Bb-beta", "Cc-gamma"};

}  // namespace

std::string_view name(ObservableId id) { return kObservableNames[static_cast<int>(id)]; }

ObservableId parse_observable(std::string_view text) {
  for (int i = 0; i < kObservableCount; ++i)
    if (kObservableNames[i] == text) return static_cast<ObservableId>(i);
  throw std::invalid_argument("unknown observable: " + std::string(text));
}

RealSplit real_split(ObservableId id) {
  using L = LinearForm;
  switch (id) {
    case ObservableId::A: return {L::action(1, 0, 0, 0), +1};
    case ObservableId::B: return {L::action(0, 0, 0, 1), +1};
    case ObservableId::C: return {L::action(1, 0, 0, 1), -1};
    case ObservableId::a: return {L::action(0, 1, 0, 0), -1};
    case ObservableId::b: return {L::action(0, 0, 1, 0), +1};
    case ObservableId::c: return {L::action(0, 1, -1, 0), +1};
    case ObservableId::alpha: return {L::action(-1, 1, 0, 0), +1};
    case ObservableId::beta: return {L::action(0, 0, 1, 1), -1};
    case ObservableId::gamma: return {L::action(1, -1, 1, 1), +1};
  }
  throw std::invalid_argument("unknown observable id");
}

std::string real_name(ObservableId id, bool double_primed) {
  return std::string(name(id)) + (double_primed ? "''" : "'");
}

std::string_view name(ContextId ctx) { return kContextNames[static_cast<int>(ctx)]; }

ContextId parse_context(std::string_view text) {
  for (int i = 0; i < kContextCount; ++i)
    if (kContextNames[i] == text) return static_cast<ContextId>(i);
  throw std::invalid_argument("unknown context: " + std::string(text));
}

std::array<ObservableId, 3> members(ContextId ctx) {
  using O = ObservableId;
  switch (ctx) {
    case ContextId::ABC: return {O::A, O::B, O::C};
    case ContextId::abc: return {O::a, O::b, O::c};
    case ContextId::alpha_beta_gamma: return {O::alpha, O::beta, O::gamma};
    case ContextId::Aa_alpha: return {O::A, O::a, O::alpha};
    case ContextId::Bb_beta: return {O::B, O::b, O::beta};
    case ContextId::Cc_gamma: return {O::C, O::c, O::gamma};
  }
  throw std::invalid_argument("unknown context id");
}

int sign(ContextId ctx) { return ctx == ContextId::Cc_gamma ? -1 : +1; }

ObservableTable observable_table(const UnitSystem& units) {
  units.validate();
  ObservableTable table;
  table.units_ = units;
  for (ObservableId id : kAllObservables) {
    const RealSplit split = real_split(id);
    table[id] = WeylOp(split.theta.scaled(Rational{split.imaginary_sign}));
  }
  return table;
}

WeylOp context_product(ContextId ctx, const ObservableTable& table) {
  const auto m = members(ctx);
  return table[m[0]] * table[m[1]] * table[m[2]];
}

WeylOp context_product(ContextId ctx, const UnitSystem& units) {
  return context_product(ctx, observable_table(units));
}

CompatibilityMatrix compatibility_matrix(const ObservableTable& table) {
  CompatibilityMatrix m{};
  for (int i = 0; i < kObservableCount; ++i)
    for (int j = 0; j < kObservableCount; ++j)
      m[i][j] = commutator_phase(table[kAllObservables[i]], table[kAllObservables[j]]);
  return m;
}

CompatibilityMatrix compatibility_matrix(const UnitSystem& units) {
  return compatibility_matrix(observable_table(units));
}

std::array<ContextCertificate, kContextCount> certify_contexts(const ObservableTable& table) {
  std::array<ContextCertificate, kContextCount> out{};
  for (int k = 0; k < kContextCount; ++k) {
    const ContextId ctx = kAllContexts[k];
    ContextCertificate& cert = out[k];
    cert.context = ctx;
    cert.product = context_product(ctx, table);
    cert.generator_zero = cert.product.is_scalar();
    const Rational expected = sign(ctx) > 0 ? Rational{0} : Rational{1};
    cert.phase_matches_sign = cert.product.phase_over_pi() == expected;
    const auto m = members(ctx);
    cert.members_commute = true;
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j)
        if (!is_zero(commutator_phase(table[m[i]], table[m[j]]))) cert.members_commute = false;
  }
  return out;
}

void write_compatibility_csv(std::ostream& os, const CompatibilityMatrix& m) {
  os << "row,col,phase_over_pi\n";
  for (int i = 0; i < kObservableCount; ++i)
    for (int j = 0; j < kObservableCount; ++j)
      os << name(kAllObservables[i]) << ',' << name(kAllObservables[j]) << ','
         << to_string(m[i][j]) << '\n';
}

void write_context_blocks_csv(std::ostream& os, const ObservableTable& table) {
  // Real observables U', U'' are polynomials in U and U^dagger, so the pair
  // phase is that of their complex parents (0 means the pair commutes).
  os << "context,row,col,phase_over_pi\n";
  for (ContextId ctx : kAllContexts) {
    const auto m = members(ctx);
    for (int r = 0; r < 6; ++r)
      for (int c = 0; c < 6; ++c) {
        const ObservableId ro = m[r / 2];
        const ObservableId co = m[c / 2];
        const Rational phase = ro == co ? Rational{0} : commutator_phase(table[ro], table[co]);
        os << name(ctx) << ',' << real_name(ro, r % 2 == 1) << ',' << real_name(co, c % 2 == 1)
           << ',' << to_string(phase) << '\n';
      }
  }
}

void write_context_products_csv(std::ostream& os,
                                const std::array<ContextCertificate, kContextCount>& certs) {
  os << "context,expected_sign,phase_over_pi,generator_zero,members_commute,ok\n";
  for (const auto& cert : certs)
    os << name(cert.context) << ',' << sign(cert.context) << ','
       << to_string(cert.product.phase_over_pi()) << ',' << (cert.generator_zero ? 1 : 0) << ','
       << (cert.members_commute ? 1 : 0) << ',' << (cert.ok() ? 1 : 0) << '\n';
}

}  // namespace cvctx::weyl
