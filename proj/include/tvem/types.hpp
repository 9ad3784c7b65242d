#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace tvem {

using Complex = std::complex<double>;
using Point = Eigen::Vector2d;
using CVector2 = Eigen::Vector2cd;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr Complex I_unit{0.0, 1.0};

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

// Zero-area, self-intersecting or otherwise unusable polygons.
class DegenerateGeometry : public Error {
public:
    using Error::Error;
};

class MeshFileError : public Error {
public:
    MeshFileError(std::string path, const std::string& what)
        : Error(path + ": " + what), path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

class SingularSystem : public Error {
public:
    using Error::Error;
};

// Local plane-wave stiffness too ill-conditioned (k^2 close to a Neumann eigenvalue).
class ResonanceProximity : public Error {
public:
    using Error::Error;
};

class FilterCollapse : public Error {
public:
    using Error::Error;
};

class NepFailure : public Error {
public:
    using Error::Error;
};

}  // namespace tvem
