#include "invlab/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace invlab
{

using nlohmann::json;

ScenarioError::ScenarioError(std::string field, std::string message, std::optional<std::size_t> line)
    : std::runtime_error(line ? "line " + std::to_string(*line) + ": " + message
                              : (field.empty() ? message : field + ": " + message))
    , field_(std::move(field))
    , line_(line)
{
}

namespace
{

/// Cursor into the document that remembers its path for diagnostics.
class Node
{
public:
    Node(json const& value, std::string path) : value_(value), path_(std::move(path)) {}

    std::string const& path() const { return path_; }
    json const& raw() const { return value_; }

    [[noreturn]] void fail(std::string const& message) const { throw ScenarioError(path_, message); }

    bool has(char const* key) const { return value_.contains(key); }

    Node at(char const* key) const
    {
        if (!value_.contains(key))
        {
            throw ScenarioError(child_path(key), "missing required field");
        }
        return {value_.at(key), child_path(key)};
    }

    Node at(std::size_t index) const { return {value_.at(index), path_ + "[" + std::to_string(index) + "]"}; }

    Node const& object() const
    {
        if (!value_.is_object())
        {
            fail("expected an object");
        }
        return *this;
    }

    std::size_t array_size() const
    {
        if (!value_.is_array())
        {
            fail("expected an array");
        }
        return value_.size();
    }

    void only_keys(std::set<std::string> const& allowed) const
    {
        object();
        for (auto const& [key, _] : value_.items())
        {
            if (!allowed.contains(key))
            {
                throw ScenarioError(child_path(key.c_str()), "unknown field");
            }
        }
    }

    double number() const
    {
        if (!value_.is_number())
        {
            fail("expected a number");
        }
        double const v = value_.get<double>();
        if (!std::isfinite(v))
        {
            fail("expected a finite number");
        }
        return v;
    }

    double positive() const
    {
        double const v = number();
        if (!(v > 0))
        {
            fail("must be positive");
        }
        return v;
    }

    std::size_t count() const
    {
        if (!value_.is_number_integer() || value_.get<long long>() < 0)
        {
            fail("expected a non-negative integer");
        }
        return value_.get<std::size_t>();
    }

    std::string string() const
    {
        if (!value_.is_string())
        {
            fail("expected a string");
        }
        return value_.get<std::string>();
    }

    Vec3 vec3() const
    {
        if (!value_.is_array() || value_.size() != 3)
        {
            fail("expected an array of three numbers");
        }
        return {at(std::size_t{0}).number(), at(std::size_t{1}).number(), at(std::size_t{2}).number()};
    }

private:
    std::string child_path(char const* key) const { return path_.empty() ? key : path_ + "." + key; }

    json const& value_;
    std::string path_;
};

Body parse_body(Node const& node, std::string default_id)
{
    node.only_keys({"id", "mass", "properties", "position", "velocity"});
    std::string id = node.has("id") ? node.at("id").string() : std::move(default_id);
    double const mass = node.at("mass").positive();
    PropertyMap properties;
    if (node.has("properties"))
    {
        Node const props = node.at("properties");
        props.object();
        for (auto const& [key, _] : props.raw().items())
        {
            if (key == "mass")
            {
                throw ScenarioError(props.path() + ".mass", "'mass' is reserved; set it on the body");
            }
            properties.emplace(key, props.at(key.c_str()).number());
        }
    }
    Vec3 const position = node.at("position").vec3();
    Vec3 const velocity = node.at("velocity").vec3();
    return Body(std::move(id), mass, std::move(properties), position, velocity);
}

LawSpec parse_law(Node const& node)
{
    node.only_keys({"preset", "params", "property"});
    LawSpec spec;
    spec.preset = node.at("preset").string();
    if (node.has("params"))
    {
        Node const params = node.at("params");
        params.object();
        for (auto const& [key, _] : params.raw().items())
        {
            spec.params.emplace(key, params.at(key.c_str()).number());
        }
    }
    spec.property = node.has("property") ? node.at("property").string() : "charge";
    return spec;
}

Mat3 parse_rotation(Node const& node)
{
    node.object();
    if (node.has("matrix"))
    {
        node.only_keys({"matrix"});
        Node const m = node.at("matrix");
        if (m.array_size() != 3)
        {
            m.fail("expected three rows");
        }
        Mat3 r;
        for (std::size_t i = 0; i < 3; ++i)
        {
            Vec3 const row = m.at(i).vec3();
            r(static_cast<int>(i), 0) = row.x;
            r(static_cast<int>(i), 1) = row.y;
            r(static_cast<int>(i), 2) = row.z;
        }
        return r;
    }
    node.only_keys({"axis", "angle", "reflect"});
    Vec3 const axis = node.at("axis").vec3();
    if (norm(axis) == 0)
    {
        node.at("axis").fail("rotation axis must be non-zero");
    }
    Mat3 r = axis_angle(axis, node.at("angle").number());
    if (node.has("reflect"))
    {
        Node const reflect = node.at("reflect");
        if (!reflect.raw().is_boolean())
        {
            reflect.fail("expected a boolean");
        }
        if (reflect.raw().get<bool>())
        {
            for (auto& row : r.m)
            {
                for (double& e : row)
                {
                    e = -e;
                }
            }
        }
    }
    return r;
}

FrameTransform parse_frame(Node const& node)
{
    node.only_keys({"rotation", "translation", "boost", "time_offset"});
    Mat3 const rotation = node.has("rotation") ? parse_rotation(node.at("rotation")) : Mat3::identity();
    Vec3 const translation = node.has("translation") ? node.at("translation").vec3() : Vec3{};
    Vec3 const boost = node.has("boost") ? node.at("boost").vec3() : Vec3{};
    double const tau = node.has("time_offset") ? node.at("time_offset").number() : 0.0;
    try
    {
        return FrameTransform(rotation, translation, boost, tau);
    }
    catch (std::invalid_argument const& e)
    {
        node.fail(e.what());
    }
}

NonlinearSpec parse_nonlinear(Node const& node)
{
    node.only_keys({"g", "C", "velocities", "samples", "baseline", "light_boosts"});
    NonlinearSpec spec;
    if (node.has("g"))
    {
        Node const g = node.at("g");
        spec.g_names.clear();
        if (g.raw().is_string())
        {
            spec.g_names.push_back(g.string());
        }
        else
        {
            for (std::size_t i = 0; i < g.array_size(); ++i)
            {
                spec.g_names.push_back(g.at(i).string());
            }
        }
        for (std::size_t i = 0; i < spec.g_names.size(); ++i)
        {
            auto const& name = spec.g_names[i];
            if (name != "lorentz" && name != "rational")
            {
                g.fail("unknown G function '" + name + "' (expected lorentz or rational)");
            }
        }
        if (spec.g_names.empty())
        {
            g.fail("at least one G function is required");
        }
    }
    if (node.has("C"))
    {
        spec.limit = node.at("C").positive();
    }
    if (node.has("velocities"))
    {
        Node const vs = node.at("velocities");
        for (std::size_t i = 0; i < vs.array_size(); ++i)
        {
            Vec3 const v = vs.at(i).vec3();
            if (!(norm(v) < spec.limit))
            {
                vs.at(i).fail("speed must be below C");
            }
            spec.velocities.push_back(v);
        }
    }
    if (node.has("samples"))
    {
        spec.samples = node.at("samples").count();
    }
    if (node.has("baseline"))
    {
        spec.baseline = node.at("baseline").positive();
    }
    if (node.has("light_boosts"))
    {
        spec.light_boosts = node.at("light_boosts").count();
    }
    return spec;
}

double param(LawSpec const& spec, std::string const& name, double fallback)
{
    auto it = spec.params.find(name);
    return it == spec.params.end() ? fallback : it->second;
}

}  // namespace

ForceLaw make_law(LawSpec const& spec, SingularityPolicy const& policy, std::string const& field)
{
    static std::map<std::string, std::set<std::string>> const allowed{
        {"gravity", {"G"}},
        {"coulomb", {"k"}},
        {"linear-drag", {"gamma"}},
        {"spring", {"kappa"}},
        {"perp-demo", {"c"}},
        {"quadratic-charge", {"k"}},
    };
    auto it = allowed.find(spec.preset);
    if (it == allowed.end())
    {
        throw ScenarioError(field + ".preset", "unknown preset '" + spec.preset
                                                   + "' (expected gravity, coulomb, linear-drag, spring, "
                                                     "perp-demo or quadratic-charge)");
    }
    for (auto const& [key, _] : spec.params)
    {
        if (!it->second.contains(key))
        {
            throw ScenarioError(field + ".params." + key, "unknown parameter for preset '" + spec.preset + "'");
        }
    }

    ForceLaw law;
    if (spec.preset == "gravity")
    {
        law = laws::gravity(param(spec, "G", 1.0));
    }
    else if (spec.preset == "coulomb")
    {
        law = laws::coulomb(param(spec, "k", 1.0), spec.property);
    }
    else if (spec.preset == "linear-drag")
    {
        law = laws::linear_drag(param(spec, "gamma", 0.1));
    }
    else if (spec.preset == "spring")
    {
        law = laws::spring(param(spec, "kappa", 1.0));
    }
    else if (spec.preset == "perp-demo")
    {
        law = laws::perp_demo(param(spec, "c", 1.0));
    }
    else
    {
        law = laws::quadratic_charge(param(spec, "k", 1.0), spec.property);
    }
    law.singularity = policy;
    return law;
}

std::vector<ForceLaw> Scenario::build_laws() const
{
    std::vector<ForceLaw> out;
    for (std::size_t i = 0; i < laws.size(); ++i)
    {
        out.push_back(make_law(laws[i], singularity, "laws[" + std::to_string(i) + "]"));
    }
    return out;
}

Scenario parse_scenario(std::string const& text)
{
    json doc;
    try
    {
        doc = json::parse(text);
    }
    catch (json::parse_error const& e)
    {
        std::size_t const byte = std::min<std::size_t>(e.byte, text.size());
        std::size_t const line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + byte, '\n'));
        throw ScenarioError("", std::string("syntax error: ") + e.what(), line);
    }

    Node const root(doc, "");
    root.only_keys({"schema", "name", "units", "bodies", "laws", "singularity", "frames", "random_frames",
                    "integrator", "nonlinear", "audits", "tolerances"});

    Scenario s;
    s.schema = root.at("schema").string();
    if (s.schema != kScenarioSchema)
    {
        root.at("schema").fail("unsupported schema '" + s.schema + "' (expected " + kScenarioSchema + ")");
    }
    s.name = root.at("name").string();
    if (s.name.empty())
    {
        root.at("name").fail("must not be empty");
    }
    if (root.has("units"))
    {
        s.units = root.at("units").string();
    }

    Node const bodies = root.at("bodies");
    if (bodies.array_size() != 2)
    {
        bodies.fail("exactly two bodies are required, got " + std::to_string(bodies.raw().size()));
    }
    s.a = parse_body(bodies.at(std::size_t{0}).object(), "A");
    s.b = parse_body(bodies.at(1).object(), "B");

    if (root.has("singularity"))
    {
        Node const sing = root.at("singularity");
        sing.only_keys({"mode", "epsilon"});
        if (sing.has("mode"))
        {
            std::string const mode = sing.at("mode").string();
            if (mode == "error")
            {
                s.singularity.mode = SingularityPolicy::Mode::error;
            }
            else if (mode == "soften")
            {
                s.singularity.mode = SingularityPolicy::Mode::soften;
            }
            else
            {
                sing.at("mode").fail("expected 'error' or 'soften'");
            }
        }
        if (sing.has("epsilon"))
        {
            s.singularity.epsilon = sing.at("epsilon").positive();
        }
    }

    if (root.has("laws"))
    {
        Node const laws = root.at("laws");
        for (std::size_t i = 0; i < laws.array_size(); ++i)
        {
            s.laws.push_back(parse_law(laws.at(i).object()));
            // Validate preset and parameters now so errors carry the path.
            make_law(s.laws.back(), s.singularity, laws.at(i).path());
        }
    }

    if (root.has("frames"))
    {
        Node const frames = root.at("frames");
        for (std::size_t i = 0; i < frames.array_size(); ++i)
        {
            s.frames.push_back(parse_frame(frames.at(i).object()));
        }
    }
    if (root.has("random_frames"))
    {
        s.random_frames = root.at("random_frames").count();
    }

    Node const integ = root.at("integrator");
    integ.only_keys({"method", "step", "t_end"});
    if (integ.has("method"))
    {
        try
        {
            s.integrator.method = parse_method(integ.at("method").string());
        }
        catch (std::invalid_argument const& e)
        {
            integ.at("method").fail(e.what());
        }
    }
    s.integrator.step = integ.at("step").positive();
    s.integrator.t_end = integ.at("t_end").positive();

    if (root.has("nonlinear"))
    {
        s.nonlinear = parse_nonlinear(root.at("nonlinear"));
    }

    Node const audits = root.at("audits");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < audits.array_size(); ++i)
    {
        std::string name = audits.at(i).string();
        if (!seen.insert(name).second)
        {
            audits.at(i).fail("audit '" + name + "' requested twice");
        }
        s.audits.push_back(std::move(name));
    }
    if (s.audits.empty())
    {
        audits.fail("at least one audit is required");
    }

    if (root.has("tolerances"))
    {
        Node const tol = root.at("tolerances");
        tol.object();
        for (auto const& [key, _] : tol.raw().items())
        {
            s.tolerances.emplace(key, tol.at(key.c_str()).positive());
        }
    }
    return s;
}

Scenario load_scenario(std::filesystem::path const& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw ScenarioError("", "cannot read scenario file '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

}  // namespace invlab
