#pragma once

#include <cstddef>
#include <vector>

namespace lsurf {

/// Row-major rectangular grid: index (i,j) with i along u, j along v.
template <typename T>
class Grid2d {
public:
    Grid2d() = default;
    Grid2d(std::size_t nu, std::size_t nv, const T& fill = T{})
        : nu_(nu), nv_(nv), data_(nu * nv, fill) {}

    std::size_t nu() const { return nu_; }
    std::size_t nv() const { return nv_; }
    bool empty() const { return data_.empty(); }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * nv_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * nv_ + j]; }

    const std::vector<T>& data() const { return data_; }
    std::vector<T>& data() { return data_; }

private:
    std::size_t nu_ = 0, nv_ = 0;
    std::vector<T> data_;
};

using GridD = Grid2d<double>;

}  // namespace lsurf
