#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace plrec {

// Dense row-major matrix, sized for desk-scale work.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> a;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}

    double& operator()(std::size_t r, std::size_t c) { return a[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return a[r * cols + c]; }
};

Matrix matmul(const Matrix& x, const Matrix& y);
Matrix transpose(const Matrix& x);
double max_abs_asymmetry(const Matrix& x);
double frobenius_distance(const Matrix& x, const Matrix& y);

struct EigenDecomposition {
    std::vector<double> values;  // descending
    Matrix vectors;              // column k pairs with values[k]
};

// Cyclic Jacobi rotations for symmetric matrices; sized for the small
// projected systems in the embedding factorization.
EigenDecomposition jacobi_eigen(const Matrix& sym, int max_sweeps = 64);

// Formats with a given number of significant digits ("%.*g").
std::string format_sig(double value, int digits);

}  // namespace plrec
