#pragma once

// Independent reference computations shared by the unit and acceptance tests.

#include "orbvol/lie.hpp"
#include "orbvol/poly.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace oracle {

using namespace orbvol;

// det(lambda I - A) by the Leibniz formula over polynomial entries.
template <class T>
Poly<T> charpoly_leibniz(const Matrix<T>& a, const T& one) {
    const std::size_t d = a.rows();
    std::vector<std::size_t> perm(d);
    std::iota(perm.begin(), perm.end(), 0);
    Poly<T> acc(one, {});
    do {
        int inversions = 0;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = i + 1; j < d; ++j)
                if (perm[i] > perm[j]) ++inversions;
        Poly<T> term = Poly<T>::constant(inversions % 2 ? -one : one);
        for (std::size_t i = 0; i < d; ++i) {
            const std::size_t j = perm[i];
            Poly<T> entry = i == j ? Poly<T>(one, {-a(i, j), one}) : Poly<T>(one, {-a(i, j)});
            term = term * entry;
        }
        acc = acc + term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return acc;
}

// Coefficientwise agreement on the common precision window.
inline bool congruent(const LPoly& a, const LPoly& b) {
    const int n = std::max(a.degree(), b.degree());
    for (int i = 0; i <= n; ++i)
        if (!a.coeff(i).congruent(b.coeff(i))) return false;
    return true;
}

// Brute determinant of a small matrix by cofactor expansion along row 0.
template <class T>
T det_cofactor(const Matrix<T>& a) {
    const std::size_t d = a.rows();
    if (d == 1) return a(0, 0);
    T acc = a(0, 0) - a(0, 0);
    for (std::size_t c = 0; c < d; ++c) {
        Matrix<T> minor(d - 1, d - 1, a(0, 0));
        for (std::size_t i = 1; i < d; ++i)
            for (std::size_t j = 0, k = 0; j < d; ++j)
                if (j != c) minor(i - 1, k++) = a(i, j);
        T term = a(0, c) * det_cofactor(minor);
        acc = c % 2 ? acc - term : acc + term;
    }
    return acc;
}

} // namespace oracle
