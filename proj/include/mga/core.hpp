#pragma once

// Shared vocabulary for the linked-conic model: planar vectors, units,
// error codes and a small value-or-error carrier used on hot paths.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

namespace mga {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kSecondsPerDay = 86400.0;

struct Vec2 {
    double x{0.0};
    double y{0.0};

    constexpr Vec2 &operator+=(const Vec2 &o) {
        x += o.x;
        y += o.y;
        return *this;
    }
    constexpr Vec2 &operator-=(const Vec2 &o) {
        x -= o.x;
        y -= o.y;
        return *this;
    }
    friend constexpr Vec2 operator+(Vec2 a, const Vec2 &b) { return a += b; }
    friend constexpr Vec2 operator-(Vec2 a, const Vec2 &b) { return a -= b; }
    friend constexpr Vec2 operator*(double s, const Vec2 &v) { return {s * v.x, s * v.y}; }
    friend constexpr Vec2 operator*(const Vec2 &v, double s) { return {s * v.x, s * v.y}; }
    friend constexpr bool operator==(const Vec2 &, const Vec2 &) = default;
};

inline double dot(const Vec2 &a, const Vec2 &b) { return a.x * b.x + a.y * b.y; }
// z-component of the 3D cross product
inline double cross(const Vec2 &a, const Vec2 &b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2 &v) { return std::hypot(v.x, v.y); }
inline Vec2 unit(const Vec2 &v) { return (1.0 / norm(v)) * v; }

// Counter-clockwise rotation.
inline Vec2 rotate(const Vec2 &v, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

// Wraps to [0, 2pi).
inline double wrap_two_pi(double angle) {
    double w = std::fmod(angle, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    if (w >= kTwoPi) w = 0.0;
    return w;
}

// Wraps to (-pi, pi].
inline double wrap_pi(double angle) {
    double w = wrap_two_pi(angle);
    if (w > kPi) w -= kTwoPi;
    return w;
}

enum class ErrorCode {
    RetrogradeOrbit,
    NonElliptic,
    DegenerateIntersection,
    NoIntersection,
    PericentreOutOfRange,
    DegenerateSwingby,
    LegInfeasible,
    UnknownBody,
    MalformedSolution,
    NumericalFailure,
    InvalidInput,
    SpaceTooLarge,
    Io,
};

inline std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::RetrogradeOrbit: return "RetrogradeOrbit";
    case ErrorCode::NonElliptic: return "NonElliptic";
    case ErrorCode::DegenerateIntersection: return "DegenerateIntersection";
    case ErrorCode::NoIntersection: return "NoIntersection";
    case ErrorCode::PericentreOutOfRange: return "PericentreOutOfRange";
    case ErrorCode::DegenerateSwingby: return "DegenerateSwingby";
    case ErrorCode::LegInfeasible: return "LegInfeasible";
    case ErrorCode::UnknownBody: return "UnknownBody";
    case ErrorCode::MalformedSolution: return "MalformedSolution";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::SpaceTooLarge: return "SpaceTooLarge";
    case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string &what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

// Value or ErrorCode. Leg construction fails routinely while scanning the
// phasing domain, so those paths report failure by value rather than throwing.
template <class T>
class Expected {
  public:
    Expected(T value) : data_(std::move(value)) {}
    Expected(ErrorCode code) : data_(code) {}

    bool has_value() const noexcept { return std::holds_alternative<T>(data_); }
    explicit operator bool() const noexcept { return has_value(); }

    const T &value() const & {
        if (!has_value()) throw Error(error(), "no value");
        return std::get<T>(data_);
    }
    T &value() & {
        if (!has_value()) throw Error(error(), "no value");
        return std::get<T>(data_);
    }
    T &&value() && {
        if (!has_value()) throw Error(error(), "no value");
        return std::get<T>(std::move(data_));
    }
    const T &operator*() const & { return std::get<T>(data_); }
    T &operator*() & { return std::get<T>(data_); }
    const T *operator->() const { return &std::get<T>(data_); }
    T *operator->() { return &std::get<T>(data_); }

    ErrorCode error() const { return std::get<ErrorCode>(data_); }

  private:
    std::variant<T, ErrorCode> data_;
};

} // namespace mga
