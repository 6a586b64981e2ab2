// reachid: simulate reachable sets, identify (A, b) from them, compare
// systems, and plot planar sets.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "reachid/commands.hpp"

namespace {

using namespace reachid;

struct Common {
    double tol_set = GeometryTolerances{}.set;
    double tol_sym = 1e-9;
    std::uint64_t seed = cli::default_seed();
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--tol-set", c.tol_set, "relative tolerance for set equality")->check(CLI::PositiveNumber);
    cmd->add_option("--tol-sym", c.tol_sym, "relative tolerance for input-interval symmetry")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--seed", c.seed, "seed for the random test directions (default: $REACHID_SEED or 0)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Identify linear dynamics x[i+1] = A x[i] + b u[i] from reachable sets"};
    app.require_subcommand(1);
    Common common;

    cli::SimulateRequest sim;
    std::string sim_format = "json";
    auto* simulate = app.add_subcommand("simulate", "write the reachable sets of a system");
    simulate->add_option("system", sim.system_path, "system file")->required()->check(CLI::ExistingFile);
    simulate->add_option("--lo", sim.lo, "lower input bound")->required();
    simulate->add_option("--hi", sim.hi, "upper input bound")->required();
    simulate->add_option("--horizon", sim.horizon, "number of sets")->required();
    simulate->add_option("-o,--out", sim.out_path, "output file (default: stdout)");
    simulate->add_option("--format", sim_format, "json or svg")->check(CLI::IsMember({"json", "svg"}));
    simulate->add_option("--generator-cap", sim.generator_cap, "vertex enumeration limit above 2D");

    cli::IdentifyRequest ident;
    auto* identify = app.add_subcommand("identify", "recover (A, b) from a reach file");
    identify->add_option("reach", ident.reach_path, "reach file")->required()->check(CLI::ExistingFile);
    identify->add_option("-o,--out", ident.out_path, "system and report output file");
    identify->add_option("--directions", ident.options.random_directions, "random test directions");
    add_common(identify, common);

    cli::VerifyRequest ver;
    auto* verify = app.add_subcommand("verify", "compare the reachable sets of two systems");
    verify->add_option("system_a", ver.system_a, "first system file")->required()->check(CLI::ExistingFile);
    verify->add_option("system_b", ver.system_b, "second system file")->required()->check(CLI::ExistingFile);
    verify->add_option("--lo", ver.lo, "lower input bound")->required();
    verify->add_option("--hi", ver.hi, "upper input bound")->required();
    verify->add_option("--horizon", ver.horizon, "number of sets")->required();
    verify->add_option("-o,--out", ver.out_path, "JSON report file");
    add_common(verify, common);

    cli::PlotRequest plot;
    std::size_t plot_time = 0;
    auto* plot_cmd = app.add_subcommand("plot", "draw planar reach files as SVG");
    plot_cmd->add_option("reach", plot.reach_paths, "reach files")->required()->check(CLI::ExistingFile);
    plot_cmd->add_option("--time", plot_time, "draw only this time step of every file");
    plot_cmd->add_option("-o,--out", plot.out_path, "SVG output file (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*simulate) {
            sim.format = cli::parse_format(sim_format);
            return cli::cmd_simulate(sim, std::cout);
        }
        if (*identify) {
            ident.options.geometry.set = common.tol_set;
            ident.options.sym = common.tol_sym;
            ident.options.seed = common.seed;
            return cli::cmd_identify(ident, std::cout);
        }
        if (*verify) {
            ver.tol_set = common.tol_set;
            ver.seed = common.seed;
            return cli::cmd_verify(ver, std::cout);
        }
        if (*plot_cmd) {
            if (plot_time > 0) plot.time = plot_time;
            return cli::cmd_plot(plot, std::cout);
        }
    } catch (const Error& e) {
        std::cerr << "reachid: " << e.what();
        if (e.time_index()) std::cerr << " [t = " << *e.time_index() << ", stage " << e.stage() << "]";
        std::cerr << "\n";
        return 3;
    }
    return 0;
}
