#pragma once

#include <cmath>

namespace cfinv {

/// Neumaier's variant of Kahan summation. Keeps the running compensation
/// exact when a term is larger in magnitude than the partial sum, which is the
/// common case early in series whose coefficients grow before the exponential
/// factor takes over.
class CompensatedSum {
public:
    void add(double term) noexcept {
        const double t = sum_ + term;
        if (std::abs(sum_) >= std::abs(term)) {
            comp_ += (sum_ - t) + term;
        } else {
            comp_ += (term - t) + sum_;
        }
        sum_ = t;
    }

    CompensatedSum& operator+=(double term) noexcept {
        add(term);
        return *this;
    }

    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace cfinv
