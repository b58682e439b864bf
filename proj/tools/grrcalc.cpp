#include <CLI11.hpp>

#include "grr/scenario.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "error: cannot open " << path << "\n";
        std::exit(2);
    }
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

int emit(const grr::RunResult& r, bool quiet) {
    if (!quiet && !r.report.empty()) std::cout << r.report;
    if (quiet && r.exit_code == 2) std::cerr << r.report;
    return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"symbolic characteristic-class calculus"};
    app.require_subcommand(1);
    bool latex = false, quiet = false;
    app.add_flag("--latex", latex, "render polynomials as LaTeX");
    app.add_flag("--quiet", quiet, "suppress output, use the exit code");

    std::string eval_file, check_file, smith_file;
    auto* eval_cmd = app.add_subcommand("eval", "evaluate the expressions of a scenario file");
    eval_cmd->add_option("file", eval_file, "scenario file")->required();
    auto* check_cmd = app.add_subcommand("check", "run the checks of a scenario file");
    check_cmd->add_option("file", check_file, "scenario file")->required();

    auto* expand_cmd = app.add_subcommand("expand", "print universal class expansions");
    int rank = 1, dim = 1;
    std::string what;
    expand_cmd->add_option("kind", what, "todd | newton")->required();
    expand_cmd->add_option("--rank", rank, "bundle rank")->required();
    expand_cmd->add_option("--dim", dim, "truncation dimension")->required();

    auto* smith_cmd = app.add_subcommand("smith", "diagonalize a matrix over a local ring");
    int precision = -1;
    smith_cmd->add_option("file", smith_file, "matrix file")->required();
    smith_cmd->add_option("--precision", precision, "override the header precision");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*eval_cmd) {
            grr::RunOptions opt{latex, quiet, false};
            return emit(grr::run_text(read_file(eval_file), opt), quiet);
        }
        if (*check_cmd) {
            grr::RunOptions opt{latex, quiet, true};
            return emit(grr::run_text(read_file(check_file), opt), quiet);
        }
        if (*expand_cmd) {
            if (what == "todd") {
                std::cout << grr::expand_todd(rank, dim, latex);
            } else if (what == "newton") {
                std::cout << grr::expand_newton(rank, dim, latex);
            } else {
                std::cerr << "error: expand kind must be todd or newton\n";
                return 2;
            }
            return 0;
        }
        if (*smith_cmd) {
            return emit(grr::run_smith(read_file(smith_file), precision, latex, quiet), quiet);
        }
    } catch (const grr::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
