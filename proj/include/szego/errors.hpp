#ifndef SZEGO_ERRORS_HPP
#define SZEGO_ERRORS_HPP

#include <stdexcept>

namespace szego {

/// Base class of every error thrown by this library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A spec/argument problem (bad matrix shape, unknown suite name, ...).
struct invalid_spec final : error { using error::error; };

// Validation failures for moduli data.
struct not_symmetric final : error { using error::error; };
struct im_not_positive_definite final : error { using error::error; };
struct non_finite final : error { using error::error; };

// Evaluation failures.
struct truncation_budget_exceeded final : error { using error::error; };
struct on_theta_divisor final : error { using error::error; };
struct diagonal_pole final : error { using error::error; };
struct pole_at_lattice_point final : error { using error::error; };
struct degenerate_fiber final : error { using error::error; };
struct zero_not_simple final : error { using error::error; };
struct aliasing_detected final : error { using error::error; };
struct sample_too_close_to_singularity final : error { using error::error; };

} // namespace szego

#endif
