#include "invlab/frames.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace invlab
{

Mat3 operator*(Mat3 const& a, Mat3 const& b)
{
    Mat3 r;
    for (int i = 0; i < 3; ++i)
    {
        for (int j = 0; j < 3; ++j)
        {
            r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j) + a(i, 2) * b(2, j);
        }
    }
    return r;
}

Vec3 operator*(Mat3 const& a, Vec3 const& v)
{
    return {a(0, 0) * v.x + a(0, 1) * v.y + a(0, 2) * v.z,
            a(1, 0) * v.x + a(1, 1) * v.y + a(1, 2) * v.z,
            a(2, 0) * v.x + a(2, 1) * v.y + a(2, 2) * v.z};
}

Mat3 transpose(Mat3 const& a)
{
    Mat3 r;
    for (int i = 0; i < 3; ++i)
    {
        for (int j = 0; j < 3; ++j)
        {
            r(i, j) = a(j, i);
        }
    }
    return r;
}

double determinant(Mat3 const& a)
{
    return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1))
           - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
           + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
}

double max_abs_difference(Mat3 const& a, Mat3 const& b)
{
    double worst = 0;
    for (int i = 0; i < 3; ++i)
    {
        for (int j = 0; j < 3; ++j)
        {
            worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
        }
    }
    return worst;
}

Mat3 axis_angle(Vec3 const& axis, double angle)
{
    double const n = norm(axis);
    if (!(n > 0))
    {
        throw std::invalid_argument("axis_angle: zero rotation axis");
    }
    Vec3 const k = axis / n;
    double const c = std::cos(angle);
    double const s = std::sin(angle);
    double const t = 1 - c;
    return Mat3{{{{t * k.x * k.x + c, t * k.x * k.y - s * k.z, t * k.x * k.z + s * k.y},
                  {t * k.x * k.y + s * k.z, t * k.y * k.y + c, t * k.y * k.z - s * k.x},
                  {t * k.x * k.z - s * k.y, t * k.y * k.z + s * k.x, t * k.z * k.z + c}}}};
}

FrameTransform::FrameTransform(Mat3 const& rotation, Vec3 translation, Vec3 boost, double time_offset)
    : rotation_(rotation)
    , translation_(translation)
    , boost_(boost)
    , time_offset_(time_offset)
{
    for (auto const& row : rotation_.m)
    {
        for (double e : row)
        {
            if (!std::isfinite(e))
            {
                throw std::invalid_argument("FrameTransform: non-finite rotation entry");
            }
        }
    }
    if (!is_finite(translation_) || !is_finite(boost_) || !std::isfinite(time_offset_))
    {
        throw std::invalid_argument("FrameTransform: non-finite translation, boost or time offset");
    }
    double const err = max_abs_difference(transpose(rotation_) * rotation_, Mat3::identity());
    if (err > kOrthogonalityTolerance)
    {
        throw std::invalid_argument("FrameTransform: rotation is not orthogonal (|R^T R - I| = "
                                    + std::to_string(err) + ")");
    }
}

Vec3 FrameTransform::map_position(Vec3 const& x, double t) const
{
    return rotation_ * x + translation_ + boost_ * (t + time_offset_);
}

Vec3 FrameTransform::map_velocity(Vec3 const& v) const { return rotation_ * v + boost_; }

Body apply(FrameTransform const& transform, Body const& body, double t)
{
    return body.with_state(transform.map_position(body.position(), t),
                           transform.map_velocity(body.velocity()));
}

FrameTransform compose(FrameTransform const& outer, FrameTransform const& inner)
{
    Mat3 const rotation = outer.rotation() * inner.rotation();
    Vec3 const boost = outer.rotation() * inner.boost() + outer.boost();
    double const tau = outer.time_offset() + inner.time_offset();
    Vec3 const offset = outer.rotation() * inner.offset() + outer.offset();
    return {rotation, offset - boost * tau, boost, tau};
}

FrameTransform inverse(FrameTransform const& transform)
{
    Mat3 const rt = transpose(transform.rotation());
    Vec3 const boost = -(rt * transform.boost());
    double const tau = -transform.time_offset();
    Vec3 const offset = -(rt * transform.offset());
    return {rt, offset - boost * tau, boost, tau};
}

double field_residual(FrameTransform const& a, FrameTransform const& b)
{
    auto max_component = [](Vec3 const& v) {
        return std::max({std::abs(v.x), std::abs(v.y), std::abs(v.z)});
    };
    return std::max({max_abs_difference(a.rotation(), b.rotation()),
                     max_component(a.translation() - b.translation()),
                     max_component(a.boost() - b.boost()),
                     std::abs(a.time_offset() - b.time_offset())});
}

FrameTransform random_transform(std::mt19937_64& rng, RandomTransformOptions const& options)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> sym(-1.0, 1.0);

    // Uniform random unit quaternion (Shoemake).
    double const u1 = unit(rng);
    double const u2 = unit(rng);
    double const u3 = unit(rng);
    double const a = std::sqrt(1 - u1);
    double const b = std::sqrt(u1);
    double const tau = 2 * std::numbers::pi;
    double const qw = a * std::sin(tau * u2);
    double const qx = a * std::cos(tau * u2);
    double const qy = b * std::sin(tau * u3);
    double const qz = b * std::cos(tau * u3);

    Mat3 r{{{{1 - 2 * (qy * qy + qz * qz), 2 * (qx * qy - qz * qw), 2 * (qx * qz + qy * qw)},
             {2 * (qx * qy + qz * qw), 1 - 2 * (qx * qx + qz * qz), 2 * (qy * qz - qx * qw)},
             {2 * (qx * qz - qy * qw), 2 * (qy * qz + qx * qw), 1 - 2 * (qx * qx + qy * qy)}}}};

    if (options.allow_reflections && unit(rng) < 0.5)
    {
        for (auto& row : r.m)
        {
            for (double& e : row)
            {
                e = -e;
            }
        }
    }

    auto random_vec = [&](double scale) {
        return Vec3{scale * sym(rng), scale * sym(rng), scale * sym(rng)};
    };
    Vec3 const translation = random_vec(options.translation_scale);
    Vec3 const boost = random_vec(options.boost_scale);
    double const offset = options.time_offset_scale * sym(rng);
    return {r, translation, boost, offset};
}

ObjectivityVerdict check_objectivity(LawResidual const& law,
                                     std::span<Representation const> representations,
                                     double tolerance)
{
    ObjectivityVerdict verdict;
    verdict.tolerance = tolerance;
    for (auto const& rep : representations)
    {
        double residual = std::abs(law(rep));
        if (std::isnan(residual))
        {
            residual = std::numeric_limits<double>::infinity();
        }
        if (!(residual < tolerance))
        {
            verdict.pass = false;
        }
        if (verdict.worst_frame.empty() || residual > verdict.worst_residual)
        {
            verdict.worst_residual = residual;
            verdict.worst_frame = rep.label;
        }
    }
    return verdict;
}

std::vector<Representation> represent(Body const& a,
                                      Body const& b,
                                      double t,
                                      std::span<FrameTransform const> transforms)
{
    std::vector<Representation> out;
    out.reserve(transforms.size() + 1);
    out.push_back({"identity", a, b});
    for (std::size_t i = 0; i < transforms.size(); ++i)
    {
        out.push_back({"frame-" + std::to_string(i),
                       apply(transforms[i], a, t),
                       apply(transforms[i], b, t)});
    }
    return out;
}

std::vector<double> offset_times(std::span<double const> times, double tau)
{
    std::vector<double> out(times.begin(), times.end());
    for (double& t : out)
    {
        t += tau;
    }
    return out;
}

bool preserves_order(std::span<double const> times, std::function<double(double)> const& map)
{
    for (std::size_t i = 1; i < times.size(); ++i)
    {
        double const before = times[i - 1];
        double const after = times[i];
        double const mb = map(before);
        double const ma = map(after);
        if (before < after && !(mb < ma))
        {
            return false;
        }
        if (before > after && !(mb > ma))
        {
            return false;
        }
    }
    return true;
}

}  // namespace invlab
