#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

namespace odmts {

// Dense square matrix of doubles, row major.
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

    std::size_t size() const { return n_; }

    double& operator()(std::size_t i, std::size_t j) {
        assert(i < n_ && j < n_);
        return data_[i * n_ + j];
    }
    double operator()(std::size_t i, std::size_t j) const {
        assert(i < n_ && j < n_);
        return data_[i * n_ + j];
    }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    bool operator==(const Matrix& other) const = default;

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

} // namespace odmts
