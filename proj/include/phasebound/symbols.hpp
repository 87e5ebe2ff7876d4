#pragma once

// Phase-space symbols of operators.
//
// Lower symbol   H_sigma(p,q)  = Tr(U sigma U^dag H), U = U[p,q]
// Upper symbol   H_{-sigma}    with H = int H_{-sigma}(p,q) U sigma U^dag dp dq / 2pi
//
// With sigma = |0><0| these are the Husimi and Glauber-Sudarshan (anti-normal)
// symbols.

#include <complex>
#include <functional>
#include <map>
#include <string>
#include <utility>

#include "phasebound/fock.hpp"
#include "phasebound/operators.hpp"
#include "phasebound/quadrature.hpp"
#include "phasebound/sigma.hpp"

namespace phasebound {

/// Exponents (i, j) of p^i q^j.
using Monomial = std::pair<unsigned, unsigned>;
using Bivariate = std::map<Monomial, double>;
using ComplexBivariate = std::map<Monomial, cplx>;

/// A real function on phase space: a sparse polynomial in (p, q), a
/// polynomial c0 + c1 s + c2 s^2 in s = p^2 + q^2, or a closure.
class PhaseSymbol {
 public:
  enum class Form { bivariate, radial, closure };
  struct Radial {
    double c0 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
  };

  static PhaseSymbol bivariate(Bivariate coeffs);
  static PhaseSymbol radial(double c0, double c1, double c2);
  static PhaseSymbol closure(std::function<double(double, double)> f);

  Form form() const { return form_; }
  double operator()(double p, double q) const;

  /// Radial coefficients; UnsupportedError for other forms.
  const Radial& radial_coefficients() const;
  /// Polynomial coefficients (radial forms are expanded);
  /// UnsupportedError for closures.
  Bivariate expanded() const;
  /// Total polynomial degree (UnsupportedError for closures).
  unsigned degree() const;

  std::string describe() const;

 private:
  Form form_ = Form::closure;
  Bivariate coeffs_;
  Radial radial_;
  std::function<double(double, double)> f_;
};

/// Coefficients of the upper symbols of P^2+Q^2, (P^2+Q^2)^2 and Q^4 for
/// sigma = sigma(N), in terms of nbar = Tr(N sigma) and n2bar = Tr(N^2 sigma):
///   (P^2+Q^2)_{-sigma}     = s + k2
///   ((P^2+Q^2)^2)_{-sigma} = s^2 + k4 s + k6
///   (Q^4)_{-sigma}         = q^4 + a2 q^2 + a4
struct UpperCoefficients {
  double k2;
  double k4;
  double k6;
  double a2;
  double a4;
  double nbar;
  double n2bar;
};

UpperCoefficients upper_coefficients(double nbar, double n2bar);

struct SymbolValue {
  double value;
  double imag_residue;   // |Im Tr(...)|, should be round-off
  double leakage;        // norm of U sigma U^dag lost past the cutoff
  bool truncated;        // leakage above 1e-10: the value is not trustworthy
};

/// Tr(U[p,q] sigma U[p,q]^dag H).
SymbolValue lower_symbol_numeric(const HermitianOperator& h, const SigmaState& sigma, double p,
                                 double q);
/// Same for an arbitrary (non-Hermitian) matrix, e.g. a single word.
cplx lower_symbol_numeric(const ComplexMatrix& a, const SigmaState& sigma, double p, double q);

/// Closed-form lower symbol of one word: expand prod (X_i + x_i) and replace
/// every ordered sub-word by its sigma average. Odd sub-words are dropped
/// with `drop_odd` (the symmetric-sigma table).
ComplexBivariate lower_symbol_word(const Word& w, const SigmaMoments& m, bool drop_odd = false);

/// Which moment table assembles the closed form.
enum class TablePath { general, symmetric };

/// Lower symbol of a Hamiltonian from the moment table. Number polynomials
/// with a number-diagonal sigma come back radial. The symmetric path
/// requires all odd moments of sigma to vanish.
PhaseSymbol lower_symbol_closed(const HamiltonianSpec& h, const SigmaMoments& m,
                                TablePath path = TablePath::general);

/// Building blocks with known upper symbols.
enum class UpperBlock { p2q2, p2q2_squared, q4 };
PhaseSymbol upper_symbol(UpperBlock block, const UpperCoefficients& c);

/// Upper symbol of a Hamiltonian for sigma = sigma(N) with the given
/// coefficients.
PhaseSymbol upper_symbol(const HamiltonianSpec& h, const UpperCoefficients& c);

/// int upper(p,q) U sigma U^dag dp dq / 2pi on the leading `block` states
/// (default: trusted block of sigma's dimension). The radial grid is doubled
/// until successive results agree to 1e-5.
ComplexMatrix reconstruct_operator(const PhaseSymbol& upper, const SigmaState& sigma,
                                   const QuadratureConfig& quad, std::size_t block = 0);

/// int upper(p,q) Tr(U[r-p, s-q] sigma U[r-p, s-q]^dag sigma) dp dq / 2pi,
/// the lower symbol at (r, s) of the operator reconstructed from `upper`.
double convolve_to_lower(const PhaseSymbol& upper, const SigmaState& sigma, double r, double s,
                         const QuadratureConfig& quad);

/// <p,q|H|p,q> with the coherent state built from its Poisson amplitudes.
double husimi_special_case(const HermitianOperator& h, double p, double q);

}  // namespace phasebound
