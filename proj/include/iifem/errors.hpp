#pragma once

#include <stdexcept>
#include <string>

namespace iifem {

struct InvalidArgument : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// The interface violates the crossing assumptions on some element; the usual fix is refining the mesh.
struct UnsupportedGeometry : std::runtime_error {
    UnsupportedGeometry(int element, const std::string& what)
        : std::runtime_error("element " + std::to_string(element) + ": " + what), element_(element) {}
    int element() const noexcept { return element_; }

private:
    int element_;
};

/// A local 6x6 basis system had a vanishing pivot.
struct SingularSystem : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OutOfDomain : std::out_of_range {
    using std::out_of_range::out_of_range;
};

/// Conjugate gradients met p^T A p <= 0.
struct NotSpd : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace iifem
