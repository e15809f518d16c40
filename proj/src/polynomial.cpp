#include "sacsim/polynomial.hpp"

#include <cmath>
#include <stdexcept>

namespace sac {

namespace {

Vector strip_leading_zeros(const Vector& c) {
    Eigen::Index lead = 0;
    while (lead < c.size() - 1 && c[lead] == Scalar{0})
        ++lead;
    if (c.size() == 0)
        return Vector::Zero(1);
    return c.tail(c.size() - lead);
}

// Parlett-Reinsch balancing (diagonal similarity with power-of-2 factors).
// Eigen's eigensolver does not balance, and companion matrices of
// wide-coefficient polynomials need it badly.
void balance_in_place(Matrix& a) {
    const Eigen::Index n = a.rows();
    bool done = false;
    while (!done) {
        done = true;
        for (Eigen::Index i = 0; i < n; ++i) {
            Scalar col = 0, row = 0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (j == i)
                    continue;
                col += std::abs(a(j, i));
                row += std::abs(a(i, j));
            }
            if (col == 0 || row == 0)
                continue;
            Scalar factor = 1.0;
            const Scalar total = col + row;
            Scalar g = row / 2.0;
            while (col < g) {
                factor *= 2.0;
                col *= 4.0;
            }
            g = row * 2.0;
            while (col > g) {
                factor /= 2.0;
                col /= 4.0;
            }
            if ((col + row) / factor < 0.95 * total) {
                done = false;
                a.row(i) *= 1.0 / factor;
                a.col(i) *= factor;
            }
        }
    }
}

// Canonical operand order (degree, then coefficients) so that a*b and b*a
// run the same summation order and produce bit-identical results.
bool before(const Polynomial& a, const Polynomial& b) {
    if (a.degree() != b.degree())
        return a.degree() < b.degree();
    for (Eigen::Index i = 0; i < a.coeffs().size(); ++i) {
        if (a.coeffs()[i] != b.coeffs()[i])
            return a.coeffs()[i] < b.coeffs()[i];
    }
    return false;
}

} // namespace

Polynomial::Polynomial(Vector coeffs) : coeffs_(strip_leading_zeros(coeffs)) {}

Polynomial::Polynomial(std::initializer_list<Scalar> coeffs) {
    Vector c(static_cast<Eigen::Index>(coeffs.size()));
    Eigen::Index i = 0;
    for (Scalar v : coeffs)
        c[i++] = v;
    coeffs_ = strip_leading_zeros(c);
}

Scalar Polynomial::operator()(Scalar s) const {
    Scalar acc = 0;
    for (Eigen::Index i = 0; i < coeffs_.size(); ++i)
        acc = acc * s + coeffs_[i];
    return acc;
}

Complex Polynomial::operator()(Complex s) const {
    Complex acc = 0;
    for (Eigen::Index i = 0; i < coeffs_.size(); ++i)
        acc = acc * s + coeffs_[i];
    return acc;
}

Polynomial Polynomial::monic() const {
    if (is_zero())
        throw std::invalid_argument("monic: zero polynomial");
    return Polynomial(Vector(coeffs_ / coeffs_[0]));
}

bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.coeffs().size() == b.coeffs().size() &&
           (a.coeffs().array() == b.coeffs().array()).all();
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    const Eigen::Index n = std::max(a.coeffs().size(), b.coeffs().size());
    Vector c = Vector::Zero(n);
    c.tail(a.coeffs().size()) += a.coeffs();
    c.tail(b.coeffs().size()) += b.coeffs();
    return Polynomial(c);
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    return a + (-1.0) * b;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    const Polynomial& p = before(a, b) ? a : b;
    const Polynomial& q = before(a, b) ? b : a;
    Vector c = Vector::Zero(p.coeffs().size() + q.coeffs().size() - 1);
    for (Eigen::Index i = 0; i < p.coeffs().size(); ++i)
        for (Eigen::Index j = 0; j < q.coeffs().size(); ++j)
            c[i + j] += p.coeffs()[i] * q.coeffs()[j];
    return Polynomial(c);
}

Polynomial operator*(Scalar k, const Polynomial& p) {
    return Polynomial(Vector(k * p.coeffs()));
}

Polynomial trim(const Polynomial& p, Scalar rel_eps) {
    const Scalar cutoff = rel_eps * p.coeffs().cwiseAbs().maxCoeff();
    Eigen::Index lead = 0;
    while (lead < p.coeffs().size() - 1 && std::abs(p.coeffs()[lead]) <= cutoff)
        ++lead;
    return Polynomial(Vector(p.coeffs().tail(p.coeffs().size() - lead)));
}

ComplexVector poly_roots(const Polynomial& p) {
    if (p.is_zero())
        throw std::invalid_argument("poly_roots: undefined roots of the zero polynomial");
    const int d = p.degree();
    if (d == 0)
        return {};

    Vector c = p.coeffs() / p.leading(); // monic, descending

    // Rescale the variable (s = alpha z) so the companion matrix is well
    // balanced; alpha is the Cauchy-style root radius bound.
    Scalar alpha = 0;
    for (int k = 1; k <= d; ++k) {
        if (c[k] != Scalar{0})
            alpha = std::max(alpha, std::pow(std::abs(c[k]), Scalar{1} / k));
    }
    if (alpha == Scalar{0})
        return ComplexVector(static_cast<size_t>(d), Complex{0, 0}); // p = s^d

    Vector q(d + 1);
    Scalar scale = 1;
    for (int k = 0; k <= d; ++k) {
        q[k] = c[k] / scale;
        scale *= alpha;
    }

    Matrix companion = Matrix::Zero(d, d);
    for (int i = 1; i < d; ++i)
        companion(i, i - 1) = 1.0;
    for (int i = 0; i < d; ++i)
        companion(i, d - 1) = -q[d - i];
    balance_in_place(companion);

    Eigen::EigenSolver<Matrix> solver(companion);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("poly_roots: eigensolver failed to converge");

    ComplexVector roots(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i)
        roots[static_cast<size_t>(i)] = alpha * solver.eigenvalues()[i];
    return roots;
}

Polynomial polynomial_from_roots(const ComplexVector& roots, Scalar leading) {
    std::vector<Complex> acc{Complex{1, 0}};
    for (const Complex& r : roots) {
        std::vector<Complex> next(acc.size() + 1, Complex{0, 0});
        for (size_t i = 0; i < acc.size(); ++i) {
            next[i] += acc[i];
            next[i + 1] -= acc[i] * r;
        }
        acc = std::move(next);
    }
    Vector c(static_cast<Eigen::Index>(acc.size()));
    for (size_t i = 0; i < acc.size(); ++i)
        c[static_cast<Eigen::Index>(i)] = leading * acc[i].real();
    return Polynomial(c);
}

} // namespace sac
