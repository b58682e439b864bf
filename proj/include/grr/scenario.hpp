#pragma once

#include "grr/checks.hpp"
#include "grr/local_smith.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace grr {

// Expression AST shared by the scenario format and the matrix files.
struct Expr {
    enum Kind { Rat, Name, Call, Bin, Pow, Neg } kind = Rat;
    Rational rat;
    std::string name;        // identifier or call head
    std::vector<Expr> args;  // call arguments / binary operands
    char op = 0;             // '+', '-', '*'
    unsigned exponent = 0;
    int line = 0, col = 0;
};

struct Statement {
    enum Kind { SpaceDecl, ImmersionDecl, BundleDecl, ClassDecl, Eval, Expect, Check } kind;
    int line = 0;
    std::string name;                 // declared name
    std::string ctor;                 // constructor head or check name
    std::vector<std::string> words;   // identifier arguments
    std::vector<int> ints;            // integer arguments
    std::vector<Rational> rats;       // rational arguments (divisor_pullback)
    std::string on;                   // space context for bundle/class/eval/expect
    std::vector<Expr> exprs;          // expressions (chern list, eval, expect sides, check args)
};

struct Scenario {
    std::vector<Statement> statements;
};

// Parses the scenario text; throws Error with ParseError/NameError/TypeError
// codes carrying line:col positions.
Scenario parse_scenario(const std::string& text);

struct RunOptions {
    bool latex = false;
    bool quiet = false;
    bool checks_only = false;  // `check` subcommand: skip eval output
};

struct RunResult {
    int exit_code = 0;  // 0 pass, 1 check failure, 2 input error
    std::string report;
};

// Executes declarations, evaluations, expectations and checks in order.
RunResult run(const Scenario& sc, const RunOptions& opt = {});
RunResult run_text(const std::string& text, const RunOptions& opt = {});

// `expand` subcommands: universal Todd and Chern-character polynomials.
std::string expand_todd(int rank, int dim, bool latex);
std::string expand_newton(int rank, int dim, bool latex);

// Matrix file: first line "r p vars...", then r*r polynomial entries.
LocalMatrix parse_matrix_file(const std::string& text, int precision_override = -1);

// Runs diagonalize + verify_smith and renders the outcome.
RunResult run_smith(const std::string& matrix_text, int precision_override, bool latex,
                    bool quiet);

}  // namespace grr
