#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "invlab/runner.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"invlab: two-body invariance laboratory"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "integrate a scenario and run its audits");
    std::string scenario;
    std::string out_dir = "out";
    std::uint64_t seed = 42;
    std::optional<double> step;
    std::string method;
    bool timing = false;
    run->add_option("scenario", scenario, "scenario JSON file")->required();
    run->add_option("--out", out_dir, "output directory")->capture_default_str();
    run->add_option("--seed", seed, "seed for randomized audits")->capture_default_str();
    run->add_option("--step", step, "override the integrator step");
    run->add_option("--method", method, "override the integrator")->check(CLI::IsMember({"rk4", "verlet"}));
    run->add_flag("--timing", timing, "record wall-clock time in report.json");

    app.add_subcommand("audits", "list available audits");
    app.add_subcommand("version", "print the version");

    try
    {
        app.parse(argc, argv);
    }
    catch (CLI::ParseError const& e)
    {
        return app.exit(e) == 0 ? 0 : 1;
    }

    if (app.got_subcommand("version"))
    {
        std::cout << "invlab " << INVLAB_VERSION << '\n';
        return 0;
    }
    if (app.got_subcommand("audits"))
    {
        invlab::list_audits(std::cout);
        return 0;
    }

    invlab::RunOptions options;
    options.seed = seed;
    options.step = step;
    options.timing = timing;
    if (!method.empty())
    {
        options.method = invlab::parse_method(method);
    }
    return invlab::run(scenario, out_dir, options, std::cout, std::cerr);
}
