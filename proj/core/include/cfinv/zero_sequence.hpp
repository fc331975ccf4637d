#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace cfinv {

/// Lazily generated, strictly increasing sequence of positive zeros of an
/// entire function, together with its growth order.
///
/// Copies share one memoized prefix. Extension happens under a mutex, so
/// concurrent readers trigger at most one extension at a time; values already
/// handed out never change.
class ZeroSequence {
public:
    /// Returns zeros that follow `known` (ascending, possibly empty). Must
    /// produce at least one new zero per call; `want` is a hint.
    using Extender = std::function<std::vector<double>(std::span<const double> known, std::size_t want)>;
    /// Closed-form zero counting function n(r) = #{zeros <= r}, when known.
    using Counting = std::function<double(double r)>;

    ZeroSequence(Extender extend, double order, std::string label = {}, Counting counting = {});

    /// k-th zero given by a formula (1-based).
    static ZeroSequence from_formula(std::function<double(std::size_t)> kth, double order,
                                     std::string label = {}, Counting counting = {});

    /// Finite head followed by a formula tail; `tail(k)` is used for k > head.size().
    static ZeroSequence padded(std::vector<double> head, std::function<double(std::size_t)> tail,
                               double order, std::string label = {});

    /// k-th zero, 1-based.
    double at(std::size_t k) const;
    std::vector<double> prefix(std::size_t n) const;
    std::size_t cached() const;

    /// n(r): closed form when available, otherwise counted from generated
    /// zeros (generating at most `max_zeros`).
    std::size_t counting(double r, std::size_t max_zeros = std::size_t{1} << 22) const;
    bool has_closed_counting() const noexcept { return static_cast<bool>(counting_); }

    double order() const noexcept { return order_; }
    const std::string& label() const noexcept { return label_; }

private:
    struct Store;
    void ensure(std::size_t n) const;

    std::shared_ptr<Store> store_;
    double order_;
    std::string label_;
    Counting counting_;
};

}  // namespace cfinv
