#ifndef MLCC_MATRIX_HPP_
#define MLCC_MATRIX_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace mlcc {

/// Dense row-major matrix of doubles.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, 0.0) {}

    double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }

    std::span<double> row(std::size_t r) { return {values.data() + r * cols, cols}; }
    std::span<const double> row(std::size_t r) const { return {values.data() + r * cols, cols}; }
};

/// Dense row-major 0/1 matrix, one byte per cell.
struct LabelMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::uint8_t> values;

    LabelMatrix() = default;
    LabelMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, 0) {}

    std::uint8_t& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
    std::uint8_t at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }

    std::span<std::uint8_t> row(std::size_t r) { return {values.data() + r * cols, cols}; }
    std::span<const std::uint8_t> row(std::size_t r) const {
        return {values.data() + r * cols, cols};
    }

    bool operator==(const LabelMatrix& other) const {
        return rows == other.rows && cols == other.cols && values == other.values;
    }
};

}  // namespace mlcc

#endif  // MLCC_MATRIX_HPP_
