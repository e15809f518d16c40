#pragma once

#include <initializer_list>

#include "sacsim/types.hpp"

namespace sac {

// Real-coefficient polynomial, coefficients stored highest degree first.
// Leading zeros are stripped on construction; the zero polynomial is the
// single coefficient [0]. Coefficients are never rescaled implicitly —
// monic() divides by the leading coefficient on explicit request only.
class Polynomial {
  public:
    Polynomial() : coeffs_(Vector::Zero(1)) {}
    explicit Polynomial(Vector coeffs);
    Polynomial(std::initializer_list<Scalar> coeffs);

    const Vector& coeffs() const { return coeffs_; }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    Scalar leading() const { return coeffs_[0]; }
    bool is_zero() const { return coeffs_.size() == 1 && coeffs_[0] == Scalar{0}; }

    // Horner evaluation.
    Scalar operator()(Scalar s) const;
    Complex operator()(Complex s) const;

    Polynomial monic() const;

  private:
    Vector coeffs_;
};

bool operator==(const Polynomial& a, const Polynomial& b);

Polynomial operator+(const Polynomial& a, const Polynomial& b);
Polynomial operator-(const Polynomial& a, const Polynomial& b);
Polynomial operator*(const Polynomial& a, const Polynomial& b);
Polynomial operator*(Scalar k, const Polynomial& p);

// Strips leading coefficients smaller than rel_eps * max|coeff|.
Polynomial trim(const Polynomial& p, Scalar rel_eps);

// All deg(p) roots with multiplicity, via eigenvalues of the companion
// matrix of the monic rescaled polynomial. Throws on the zero polynomial.
ComplexVector poly_roots(const Polynomial& p);

// Monic real polynomial with the given roots (must be closed under
// conjugation; imaginary residue of the product is dropped).
Polynomial polynomial_from_roots(const ComplexVector& roots, Scalar leading = 1.0);

} // namespace sac
