#pragma once

#include <stdexcept>
#include <string>

namespace cocycle {

// A matrix along an orbit fell below the determinant floor.
class non_invertible_error : public std::runtime_error {
public:
    non_invertible_error(double det, long orbit_index)
        : std::runtime_error("singular matrix (det = " + std::to_string(det) +
                             ") at orbit index " + std::to_string(orbit_index)),
          det_(det), orbit_index_(orbit_index) {}

    double det() const { return det_; }
    long orbit_index() const { return orbit_index_; }

private:
    double det_;
    long orbit_index_;
};

// Overflow / non-finite value in a numeric kernel, with orbit location.
class numeric_error : public std::runtime_error {
public:
    numeric_error(const std::string& what, long orbit_index)
        : std::runtime_error(what + " at orbit index " + std::to_string(orbit_index)),
          orbit_index_(orbit_index) {}

    long orbit_index() const { return orbit_index_; }

private:
    long orbit_index_;
};

// The stretch-factor denominator a_theta - c_theta * u_theta(Tx) lost
// positivity: theta is outside the valid window.
class nonpositive_denominator_error : public std::runtime_error {
public:
    nonpositive_denominator_error(double value, long orbit_index)
        : std::runtime_error("nonpositive stretch denominator (" + std::to_string(value) +
                             ") at orbit index " + std::to_string(orbit_index)),
          value_(value), orbit_index_(orbit_index) {}

    double value() const { return value_; }
    long orbit_index() const { return orbit_index_; }

private:
    double value_;
    long orbit_index_;
};

// A structural contract was violated by the data (wrong section, negative
// lambda on an orientation-preserving cocycle, ...).
class data_error : public std::runtime_error {
public:
    explicit data_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace cocycle
