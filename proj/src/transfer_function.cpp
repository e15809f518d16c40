#include "sacsim/transfer_function.hpp"

#include <stdexcept>

namespace sac {

TransferFunction::TransferFunction(Polynomial numerator, Polynomial denominator)
    : num(std::move(numerator)), den(std::move(denominator)) {
    if (den.is_zero())
        throw std::invalid_argument("TransferFunction: denominator is identically zero");
}

bool operator==(const TransferFunction& a, const TransferFunction& b) {
    return a.num == b.num && a.den == b.den;
}

TransferFunction operator+(const TransferFunction& a, const TransferFunction& b) {
    return {a.num * b.den + b.num * a.den, a.den * b.den};
}

TransferFunction reciprocal(const TransferFunction& tf) {
    return {tf.den, tf.num};
}

int relative_degree(const TransferFunction& tf) {
    return tf.den.degree() - tf.num.degree();
}

bool is_hurwitz(const ComplexVector& roots, Scalar margin) {
    for (const Complex& r : roots) {
        if (!(r.real() < -margin))
            return false;
    }
    return true;
}

bool is_minimum_phase(const TransferFunction& tf, Scalar margin) {
    if (tf.num.is_zero())
        throw std::invalid_argument("is_minimum_phase: zero numerator");
    return is_hurwitz(poly_roots(tf.num), margin);
}

Complex evaluate(const TransferFunction& tf, Complex s) {
    return tf.num(s) / tf.den(s);
}

TransferFunction reduce(const TransferFunction& tf, Scalar tol) {
    ComplexVector zeros = poly_roots(tf.num);
    ComplexVector poles = poly_roots(tf.den);

    std::vector<bool> pole_used(poles.size(), false);
    ComplexVector kept_zeros;
    for (const Complex& z : zeros) {
        bool cancelled = false;
        for (size_t i = 0; i < poles.size(); ++i) {
            if (!pole_used[i] && std::abs(z - poles[i]) <= tol) {
                pole_used[i] = true;
                cancelled = true;
                break;
            }
        }
        if (!cancelled)
            kept_zeros.push_back(z);
    }
    ComplexVector kept_poles;
    for (size_t i = 0; i < poles.size(); ++i) {
        if (!pole_used[i])
            kept_poles.push_back(poles[i]);
    }
    return {polynomial_from_roots(kept_zeros, tf.num.leading()),
            polynomial_from_roots(kept_poles, tf.den.leading())};
}

} // namespace sac
