#pragma once

#include <array>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "invlab/body.hpp"
#include "invlab/vec3.hpp"

namespace invlab
{

/// Row-major 3x3 matrix.
struct Mat3
{
    std::array<std::array<double, 3>, 3> m{};

    static constexpr Mat3 identity()
    {
        return Mat3{{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}};
    }

    constexpr double operator()(int r, int c) const { return m[r][c]; }
    constexpr double& operator()(int r, int c) { return m[r][c]; }

    friend constexpr bool operator==(Mat3 const&, Mat3 const&) = default;
};

Mat3 operator*(Mat3 const& a, Mat3 const& b);
Vec3 operator*(Mat3 const& a, Vec3 const& v);
Mat3 transpose(Mat3 const& a);
double determinant(Mat3 const& a);
/// Largest absolute entry of a - b.
double max_abs_difference(Mat3 const& a, Mat3 const& b);

/// Rotation by `angle` radians about `axis` (need not be normalized).
Mat3 axis_angle(Vec3 const& axis, double angle);

/// One element of the group of observer decisions: an orthogonal change of
/// axes (rotation or reflection), a change of origin, a Galilean boost and a
/// clock offset.
///
/// A body at (x, v) observed at time t maps to
///   x' = R x + d + w (t + tau),   v' = R v + w.
/// Mass and properties are untouched.
class FrameTransform
{
public:
    /// Orthogonality tolerance applied at construction.
    static constexpr double kOrthogonalityTolerance = 1e-10;

    FrameTransform() = default;

    /// Throws std::invalid_argument if `rotation` is not orthogonal or any
    /// field is non-finite.
    FrameTransform(Mat3 const& rotation, Vec3 translation, Vec3 boost, double time_offset);

    static FrameTransform identity() { return {}; }
    static FrameTransform pure_boost(Vec3 w) { return {Mat3::identity(), {}, w, 0.0}; }
    static FrameTransform pure_translation(Vec3 d) { return {Mat3::identity(), d, {}, 0.0}; }
    static FrameTransform pure_rotation(Mat3 const& r) { return {r, {}, {}, 0.0}; }
    static FrameTransform pure_time_offset(double tau) { return {Mat3::identity(), {}, {}, tau}; }

    Mat3 const& rotation() const { return rotation_; }
    Vec3 const& translation() const { return translation_; }
    Vec3 const& boost() const { return boost_; }
    double time_offset() const { return time_offset_; }

    bool is_reflection() const { return determinant(rotation_) < 0; }

    /// Net displacement at t = 0, d + w tau. Composition acts linearly on it.
    Vec3 offset() const { return translation_ + boost_ * time_offset_; }

    Vec3 map_position(Vec3 const& x, double t) const;
    Vec3 map_velocity(Vec3 const& v) const;

private:
    Mat3 rotation_ = Mat3::identity();
    Vec3 translation_;
    Vec3 boost_;
    double time_offset_{0};
};

Body apply(FrameTransform const& transform, Body const& body, double t);

/// apply(compose(outer, inner), b, t) == apply(outer, apply(inner, b, t), t).
FrameTransform compose(FrameTransform const& outer, FrameTransform const& inner);

FrameTransform inverse(FrameTransform const& transform);

/// Largest absolute difference over every field of the two transforms.
double field_residual(FrameTransform const& a, FrameTransform const& b);

struct RandomTransformOptions
{
    double translation_scale{10.0};
    double boost_scale{1.0};
    double time_offset_scale{5.0};
    bool allow_reflections{true};
};

/// Uniformly distributed rotation (optionally composed with a reflection)
/// plus uniform translation, boost and time offset in the given ranges.
FrameTransform random_transform(std::mt19937_64& rng, RandomTransformOptions const& options = {});

/// Representation of a body pair as seen by one observer.
struct Representation
{
    std::string label;
    Body a;
    Body b;
};

/// Scalar law F evaluated on one representation; objective when F == 0.
using LawResidual = std::function<double(Representation const&)>;

struct ObjectivityVerdict
{
    bool pass{true};
    double worst_residual{0};
    std::string worst_frame;  ///< label of the worst representation
    double tolerance{0};
};

/// Default tolerances for algebraic and integrated laws.
inline constexpr double kAlgebraicTolerance = 1e-12;
inline constexpr double kIntegratedTolerance = 1e-9;

/// PASS iff |F| < tolerance in every representation.
ObjectivityVerdict check_objectivity(LawResidual const& law,
                                     std::span<Representation const> representations,
                                     double tolerance = kAlgebraicTolerance);

/// Copies of the pair (a, b) at time t under each transform. The first entry
/// is the untransformed pair labelled "identity".
std::vector<Representation> represent(Body const& a,
                                      Body const& b,
                                      double t,
                                      std::span<FrameTransform const> transforms);

/// Event times as seen after a clock offset.
std::vector<double> offset_times(std::span<double const> times, double tau);

/// True when `map` keeps the strict order of every consecutive pair of
/// event times.
bool preserves_order(std::span<double const> times, std::function<double(double)> const& map);

}  // namespace invlab
