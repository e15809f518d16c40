#pragma once

#include "sacsim/polynomial.hpp"

namespace sac {

// Ratio of two real-coefficient polynomials. Never reduced implicitly:
// sums keep the full cross-multiplied degree so that printed coefficient
// arrays stay comparable across tools.
struct TransferFunction {
    Polynomial num;
    Polynomial den;

    TransferFunction(Polynomial numerator, Polynomial denominator);
};

bool operator==(const TransferFunction& a, const TransferFunction& b);

// (a.num b.den + b.num a.den) / (a.den b.den), unreduced.
TransferFunction operator+(const TransferFunction& a, const TransferFunction& b);

// den/num; throws if num is identically zero.
TransferFunction reciprocal(const TransferFunction& tf);

// deg(den) - deg(num).
int relative_degree(const TransferFunction& tf);

// True iff every root has real part < -margin.
bool is_hurwitz(const ComplexVector& roots, Scalar margin = kStabilityMargin);

// True iff every numerator root has real part < -margin. Throws on zero numerator.
bool is_minimum_phase(const TransferFunction& tf, Scalar margin = kStabilityMargin);

Complex evaluate(const TransferFunction& tf, Complex s);

// Cancels numerator/denominator root pairs closer than tol. Opt-in utility;
// nothing in the library calls it implicitly.
TransferFunction reduce(const TransferFunction& tf, Scalar tol = 1e-6);

} // namespace sac
