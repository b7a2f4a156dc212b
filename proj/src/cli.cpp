#include "ndpolar/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "ndpolar/aggregation.hpp"
#include "ndpolar/document.hpp"
#include "ndpolar/error.hpp"
#include "ndpolar/io.hpp"
#include "ndpolar/render.hpp"
#include "ndpolar/rules.hpp"
#include "ndpolar/service.hpp"

namespace ndpolar {

using nlohmann::json;

namespace {

std::filesystem::path resolve_model_path(const std::string& arg)
{
    std::filesystem::path p(arg);
    if (!std::filesystem::exists(p)) {
        std::filesystem::path alt(arg + ".ndpolar.json");
        if (std::filesystem::exists(alt)) {
            return alt;
        }
    }
    return p;
}

RiskPosition risk_or_default(const RiskModel& model, const std::string& text)
{
    if (!text.empty()) {
        return parse_risk(model.space(), text);
    }
    if (model.risk()) {
        return *model.risk();
    }
    throw Error(ErrorCode::invalid, "--risk is required: the model has no risk position");
}

int exit_for(const Error& e)
{
    return e.code() == ErrorCode::io ? exit_runtime : exit_validation;
}

json diagnostic_json(const Diagnostic& d)
{
    json out = {{"severity", severity_name(d.severity)}, {"code", d.code}, {"message", d.message}};
    if (d.span) {
        out["line"] = d.span->line;
        out["column"] = d.span->column;
    }
    return out;
}

}  // namespace

int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"ND polar heatmap risk engine", "ndpolar"};
    app.require_subcommand(1);

    std::string model_arg;
    std::string format;
    std::vector<std::string> sets;
    std::string risk_text;

    auto* validate_cmd = app.add_subcommand("validate", "Validate a model document");
    bool lint_monotone = false;
    validate_cmd->add_option("model", model_arg, "Model document")->required();
    validate_cmd->add_option("--format", format, "Diagnostics format")->check(CLI::IsMember({"text", "json"}));
    validate_cmd->add_flag("--monotonicity", lint_monotone, "Also report non-monotone rows and columns");

    auto* slice_cmd = app.add_subcommand("slice", "Print the 2D slice for a context selection");
    slice_cmd->add_option("model", model_arg, "Model document")->required();
    slice_cmd->add_option("--set", sets, "Context level, axis=level (repeatable)");
    slice_cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));

    auto* aggregate_cmd = app.add_subcommand("aggregate", "Aggregated likelihood and impact colours");
    aggregate_cmd->add_option("model", model_arg, "Model document")->required();
    aggregate_cmd->add_option("--set", sets, "Context level, axis=level (repeatable)");
    aggregate_cmd->add_option("--risk", risk_text, "Risk position L,I");
    aggregate_cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));

    auto* walk_cmd = app.add_subcommand("walk", "Step one context axis through its levels");
    std::string vary;
    bool inline_grids = false;
    walk_cmd->add_option("model", model_arg, "Model document")->required();
    walk_cmd->add_option("--vary", vary, "Context axis to vary")->required();
    walk_cmd->add_option("--set", sets, "Fixed context levels, axis=level (repeatable)");
    walk_cmd->add_option("--risk", risk_text, "Risk position L,I");
    walk_cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    walk_cmd->add_flag("--inline-grids", inline_grids, "Include full grids in JSON output");

    auto* violations_cmd = app.add_subcommand("violations", "Threshold violations of a state");
    std::string state_text;
    violations_cmd->add_option("model", model_arg, "Model document")->required();
    violations_cmd->add_option("--state", state_text, "Full state l1,l2,...")->required();
    violations_cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));

    auto* render_cmd = app.add_subcommand("render", "Render an SVG view");
    std::string view = "matrix";
    std::string output;
    double width = 0.0;
    double height = 0.0;
    std::vector<std::string> theme;
    bool no_labels = false;
    bool no_thresholds = false;
    render_cmd->add_option("model", model_arg, "Model document")->required();
    render_cmd->add_option("--view", view, "matrix or polar")->check(CLI::IsMember({"matrix", "polar"}));
    render_cmd->add_option("--set", sets, "Context level, axis=level (repeatable)");
    render_cmd->add_option("--risk", risk_text, "Risk position L,I");
    render_cmd->add_option("-o,--output", output, "Output file (default stdout)");
    render_cmd->add_option("--width", width, "Width in px")->check(CLI::PositiveNumber);
    render_cmd->add_option("--height", height, "Height in px")->check(CLI::PositiveNumber);
    render_cmd->add_option("--theme", theme, "Colour override, grade=#RRGGBB (repeatable)");
    render_cmd->add_flag("--no-labels", no_labels, "Omit labels");
    render_cmd->add_flag("--no-thresholds", no_thresholds, "Omit threshold arcs");

    auto* serve_cmd = app.add_subcommand("serve", "Serve the HTTP API");
    int port = 8080;
    std::string host = "127.0.0.1";
    std::string ui_dir;
    serve_cmd->add_option("model", model_arg, "Model document")->required();
    serve_cmd->add_option("--port", port, "Port")->check(CLI::Range(0, 65535));
    serve_cmd->add_option("--host", host, "Bind address");
    serve_cmd->add_option("--ui-dir", ui_dir, "Static UI bundle directory")->check(CLI::ExistingDirectory);

    std::vector<std::string> argv(args.begin() + (args.empty() ? 0 : 1), args.end());
    std::reverse(argv.begin(), argv.end());
    try {
        app.parse(argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }

    const std::filesystem::path model_path = resolve_model_path(model_arg);

    if (validate_cmd->parsed()) {
        const bool as_json = format == "json";
        try {
            RiskModel model = load_model(model_path);
            LintOptions opts;
            opts.monotonicity = lint_monotone;
            auto diags = lint_rules(model.assignment(), model.space(), model.scale(), opts);
            json list = json::array();
            for (const auto& d : diags) {
                if (as_json) {
                    list.push_back(diagnostic_json(d));
                } else {
                    err << severity_name(d.severity) << ": " << d.code << ": " << d.message << "\n";
                }
            }
            if (as_json) {
                err << json{{"valid", true}, {"diagnostics", list}}.dump() << "\n";
            }
            out << "valid: " << model.name() << " (d=" << model.space().dims() << ", states=" << model.space().size()
                << ")\n";
            return exit_ok;
        } catch (const Error& e) {
            if (as_json) {
                err << json{{"valid", false},
                            {"diagnostics", json::array({{{"severity", "error"},
                                                          {"code", code_name(e.code())},
                                                          {"message", e.what()}}})}}
                           .dump()
                    << "\n";
            } else {
                err << "error: " << code_name(e.code()) << ": " << e.what() << "\n";
            }
            return exit_for(e);
        }
    }

    try {
        RiskModel model = load_model(model_path);
        const StateSpace& space = model.space();

        if (slice_cmd->parsed()) {
            SliceSelector sigma = complete_slice(model, parse_slice_assignments(space, sets));
            MatrixSlice grid = slice(model, sigma);
            if (format == "json") {
                out << slice_to_json(model, sigma, grid).dump() << "\n";
            } else {
                out << slice_to_csv(model, sigma, grid);
            }
            return exit_ok;
        }

        if (aggregate_cmd->parsed()) {
            SliceSelector sigma = complete_slice(model, parse_slice_assignments(space, sets));
            RiskPosition risk = risk_or_default(model, risk_text);
            MatrixSlice grid = slice(model, sigma);
            AxisAggregates agg = aggregate_slice(grid, model.scale(), risk);
            if (format == "json") {
                out << aggregates_to_json(model, agg, risk, grid.at(risk.likelihood, risk.impact)).dump() << "\n";
            } else {
                auto line = [&](const std::string& id, const std::vector<Grade>& grades) {
                    out << id << ":";
                    for (std::size_t i = 0; i < grades.size(); ++i) {
                        out << (i ? "," : " ") << model.scale().id(grades[i]);
                    }
                    out << "\n";
                };
                line(space.axis(0).id, agg.likelihood.per_level);
                line(space.axis(1).id, agg.impact.per_level);
            }
            return exit_ok;
        }

        if (walk_cmd->parsed()) {
            SliceSelector fixed = parse_slice_assignments(space, sets);
            WalkResult result = walk(model, vary, fixed, risk_or_default(model, risk_text), WalkOptions{inline_grids});
            if (format == "json") {
                out << walk_to_json(model, result).dump() << "\n";
            } else {
                const Axis& axis = space.axis(result.axis);
                out << "level,label,risk_grade,V\n";
                for (const WalkStep& s : result.steps) {
                    out << s.level << "," << axis.labels[s.level] << "," << model.scale().id(s.risk_grade) << ","
                        << s.violations << "\n";
                }
            }
            return exit_ok;
        }

        if (violations_cmd->parsed()) {
            Violations v = violations(model, parse_state(space, state_text));
            out << (format == "json" ? violations_to_json(v).dump() : violations_to_text(v)) << "\n";
            return exit_ok;
        }

        if (render_cmd->parsed()) {
            RenderSpec spec;
            spec.view = view == "polar" ? View::polar : View::matrix;
            spec.width = width;
            spec.height = height;
            spec.show_labels = !no_labels;
            spec.show_thresholds = !no_thresholds;
            for (const std::string& t : theme) {
                auto eq = t.find('=');
                if (eq == std::string::npos) {
                    err << "error: --theme expects grade=#RRGGBB, got '" << t << "'\n";
                    return exit_usage;
                }
                spec.theme[t.substr(0, eq)] = t.substr(eq + 1);
            }
            SliceSelector sigma = complete_slice(model, parse_slice_assignments(space, sets));
            std::string svg = render(model, sigma, risk_or_default(model, risk_text), spec);
            if (output.empty()) {
                out << svg;
            } else {
                std::ofstream file(output, std::ios::binary);
                file << svg;
                if (!file) {
                    throw Error(ErrorCode::io, "cannot write '" + output + "'");
                }
            }
            return exit_ok;
        }

        if (serve_cmd->parsed()) {
            Service service(std::move(model), ServiceOptions{ui_dir});
            int bound = service.bind(host, port);
            if (bound < 0) {
                throw Error(ErrorCode::io, "cannot bind " + host + ":" + std::to_string(port));
            }
            out << "serving on http://" << host << ":" << bound << "/\n" << std::flush;
            return service.listen() ? exit_ok : exit_runtime;
        }
    } catch (const Error& e) {
        err << "error: " << code_name(e.code()) << ": " << e.what() << "\n";
        return exit_for(e);
    }
    return exit_usage;
}

}  // namespace ndpolar
