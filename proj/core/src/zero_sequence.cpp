#include "cfinv/zero_sequence.hpp"

#include "cfinv/errors.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

namespace cfinv {

struct ZeroSequence::Store {
    std::mutex mutex;
    std::vector<double> zeros;
    Extender extend;
};

ZeroSequence::ZeroSequence(Extender extend, double order, std::string label, Counting counting)
    : store_(std::make_shared<Store>()), order_(order), label_(std::move(label)),
      counting_(std::move(counting)) {
    if (!extend) throw std::invalid_argument("ZeroSequence needs an extender");
    store_->extend = std::move(extend);
}

ZeroSequence ZeroSequence::from_formula(std::function<double(std::size_t)> kth, double order,
                                        std::string label, Counting counting) {
    auto extend = [kth = std::move(kth)](std::span<const double> known, std::size_t want) {
        std::vector<double> out;
        out.reserve(want);
        for (std::size_t k = known.size() + 1; k <= known.size() + want; ++k) out.push_back(kth(k));
        return out;
    };
    return ZeroSequence(std::move(extend), order, std::move(label), std::move(counting));
}

ZeroSequence ZeroSequence::padded(std::vector<double> head, std::function<double(std::size_t)> tail,
                                  double order, std::string label) {
    auto kth = [head = std::move(head), tail = std::move(tail)](std::size_t k) {
        return k <= head.size() ? head[k - 1] : tail(k);
    };
    return from_formula(std::move(kth), order, std::move(label));
}

void ZeroSequence::ensure(std::size_t n) const {
    std::lock_guard lock(store_->mutex);
    auto& zeros = store_->zeros;
    while (zeros.size() < n) {
        const std::size_t want = std::max<std::size_t>(n - zeros.size(), 16);
        std::vector<double> fresh = store_->extend(std::span<const double>(zeros), want);
        if (fresh.empty()) throw std::logic_error("zero extender produced no zeros for " + label_);
        for (double z : fresh) {
            const double prev = zeros.empty() ? 0.0 : zeros.back();
            if (!(std::isfinite(z) && z > prev)) {
                throw std::logic_error("zero sequence " + label_ + " is not strictly increasing and positive");
            }
            zeros.push_back(z);
        }
    }
}

double ZeroSequence::at(std::size_t k) const {
    if (k == 0) throw std::out_of_range("zero index is 1-based");
    ensure(k);
    std::lock_guard lock(store_->mutex);
    return store_->zeros[k - 1];
}

std::vector<double> ZeroSequence::prefix(std::size_t n) const {
    ensure(n);
    std::lock_guard lock(store_->mutex);
    return {store_->zeros.begin(), store_->zeros.begin() + static_cast<std::ptrdiff_t>(n)};
}

std::size_t ZeroSequence::cached() const {
    std::lock_guard lock(store_->mutex);
    return store_->zeros.size();
}

std::size_t ZeroSequence::counting(double r, std::size_t max_zeros) const {
    if (counting_) return static_cast<std::size_t>(std::max(0.0, std::floor(counting_(r))));
    std::size_t n = std::max<std::size_t>(cached(), 64);
    while (true) {
        ensure(n);
        std::lock_guard lock(store_->mutex);
        const auto& zeros = store_->zeros;
        if (zeros.back() > r) {
            return static_cast<std::size_t>(std::upper_bound(zeros.begin(), zeros.end(), r) - zeros.begin());
        }
        if (n >= max_zeros) fail(ErrorKind::Inconclusive, "counting " + label_ + " needs more than max_zeros zeros");
        n = std::min(2 * n, max_zeros);
    }
}

}  // namespace cfinv
