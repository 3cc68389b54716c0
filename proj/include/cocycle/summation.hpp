#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace cocycle {

// Neumaier-compensated accumulator. Birkhoff sums go through this so the
// result does not depend on how the terms were partitioned across threads.
class NeumaierSum {
public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }

    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Compensated sum of a slot vector (serial merge of per-sample results).
inline double compensated_sum(const std::vector<double>& v) {
    NeumaierSum s;
    for (double x : v) s.add(x);
    return s.value();
}

inline double compensated_mean(const std::vector<double>& v) {
    return v.empty() ? 0.0 : compensated_sum(v) / static_cast<double>(v.size());
}

} // namespace cocycle
