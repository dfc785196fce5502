#include <cstdio>
#include <string>

#include "CLI11.hpp"

#include "warplag/config.hpp"
#include "warplag/errors.hpp"
#include "warplag/runner.hpp"

namespace {

struct CliOptions {
    std::string config_path;
    std::string report_path;
    long long samples = -1;
    long long seed = -1;
    double tol_geom = -1.0;
};

void attach_options(CLI::App* sub, CliOptions& opt) {
    sub->add_option("--config", opt.config_path, "path to the JSON run config")->required();
    sub->add_option("--samples", opt.samples, "override the sample count");
    sub->add_option("--seed", opt.seed, "override the sampling seed");
    sub->add_option("--tol-geom", opt.tol_geom,
                    "geometry tolerance anchor X: lagrangian X, space X/100, "
                    "codazzi 10X, gauss 100X");
    sub->add_option("--report", opt.report_path, "write the report here instead of stdout");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lagrangian warped-product chart toolkit"};
    app.require_subcommand(1);

    CliOptions opt;
    const char* commands[] = {"build", "verify", "classify", "ode-check"};
    const char* blurbs[] = {"construct the chart and sample it",
                            "run the geometry residual suite",
                            "detect the product eigenstructure and render a verdict",
                            "exercise the profile ODE machinery"};
    for (int i = 0; i < 4; ++i) attach_options(app.add_subcommand(commands[i], blurbs[i]), opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        warplag::RunConfig cfg = warplag::parse_config(opt.config_path);
        if (opt.samples >= 1) cfg.samples = static_cast<std::size_t>(opt.samples);
        if (opt.seed >= 0) cfg.seed = static_cast<std::uint64_t>(opt.seed);
        if (opt.tol_geom > 0.0) {
            cfg.tol.lagrangian = opt.tol_geom;
            cfg.tol.space = opt.tol_geom / 100.0;
            cfg.tol.codazzi = opt.tol_geom * 10.0;
            cfg.tol.gauss = opt.tol_geom * 100.0;
        }
        if (!opt.report_path.empty()) cfg.report_path = opt.report_path;

        auto [report, code] = warplag::run_command(command, cfg);
        warplag::write_report(report, cfg.report_path);
        if (code != 0) {
            for (const auto& rec : report.at("checks"))
                if (!rec.at("pass").get<bool>())
                    std::fprintf(stderr, "check failed: %s\n",
                                 rec.at("name").get<std::string>().c_str());
        }
        return code;
    } catch (const warplag::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const warplag::Error& e) {
        std::fprintf(stderr, "construction error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
