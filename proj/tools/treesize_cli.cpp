// Command-line front end: treesize <verb> [input] [options]; JSON on stdout.
//
// Input is one of --ket TEXT, --state JSON, --tree JSON, --file PATH, or
// stdin when none is given. File and stdin contents starting with '{' are
// JSON, anything else is a bra-ket formula.
//
// Exit codes: 0 success, 2 input error, 3 numerical degeneracy or budget.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "treesize/json_io.hpp"

namespace {

using namespace treesize;

struct Input {
    std::string ket;
    std::string state;
    std::string tree;
    std::string file;
};

void add_input(CLI::App *cmd, Input &in) {
    auto *g = cmd->add_option_group("input", "exactly one input source (stdin when none is given)");
    g->add_option("--ket", in.ket, "bra-ket formula");
    g->add_option("--state", in.state, "state JSON {\"n\":..,\"amps\":[[re,im],..]}");
    g->add_option("--tree", in.tree, "tree JSON");
    g->add_option("--file", in.file, "file holding JSON or a bra-ket formula");
    g->require_option(0, 1);
}

std::string slurp(std::istream &is) {
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

Json parse_json(const std::string &text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error &e) {
        throw InputError(std::string("invalid JSON: ") + e.what());
    }
}

/// Raw text of the selected input and whether it is JSON.
std::pair<std::string, bool> read_input(const Input &in) {
    if (!in.ket.empty()) {
        return {in.ket, false};
    }
    if (!in.state.empty()) {
        return {in.state, true};
    }
    if (!in.tree.empty()) {
        return {in.tree, true};
    }
    std::string text;
    if (!in.file.empty()) {
        std::ifstream f(in.file);
        if (!f) {
            throw InputError("cannot open " + in.file);
        }
        text = slurp(f);
    } else {
        text = slurp(std::cin);
    }
    text = trim(text);
    if (text.empty()) {
        throw InputError("empty input");
    }
    return {text, text.front() == '{'};
}

TreeNode input_tree(const Input &in) {
    const auto [text, is_json] = read_input(in);
    if (!is_json) {
        return parse_braket(text);
    }
    const Json j = parse_json(text);
    if (j.contains("amps")) {
        throw InputError("expected a tree or bra-ket formula, got a state");
    }
    return tree_from_json(j);
}

PureState input_state(const Input &in) {
    const auto [text, is_json] = read_input(in);
    if (!is_json) {
        return evaluate(parse_braket(text));
    }
    const Json j = parse_json(text);
    if (j.contains("amps")) {
        return state_from_json(j);
    }
    return evaluate(tree_from_json(j));
}

void emit(const Json &j) { std::cout << j.dump() << '\n'; }

OptOptions opt_from(std::uint64_t seed, int restarts) {
    OptOptions o;
    o.seed = seed;
    o.restarts = restarts;
    return o;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Tree size of two- to four-qubit states"};
    app.require_subcommand(1);
    Input in;
    std::uint64_t seed = 0;
    int restarts = 64;

    auto *parse = app.add_subcommand("parse", "bra-ket formula -> tree JSON and size");
    add_input(parse, in);

    auto *eval = app.add_subcommand("eval", "tree (JSON or bra-ket) -> state JSON");
    add_input(eval, in);

    auto *classify = app.add_subcommand("classify", "SLOCC class of a 2- or 3-qubit state");
    add_input(classify, in);

    bool use_oracle = false;
    auto *ts = app.add_subcommand("treesize", "tree size bounds and a tree achieving the upper bound");
    add_input(ts, in);
    ts->add_flag("--oracle", use_oracle, "search shapes below the constructed bound (slow for 4 qubits)");
    ts->add_option("--seed", seed, "optimizer seed");
    ts->add_option("--restarts", restarts, "optimizer restarts per shape");

    auto *dec = app.add_subcommand("decompose", "smallest constructed tree");
    add_input(dec, in);

    auto *irr = app.add_subcommand("irreducible", "irreducible A|BCD test for a 4-qubit state");
    add_input(irr, in);

    double eps = 0.0;
    auto *ets = app.add_subcommand("epsilon-ts", "epsilon-approximate tree size");
    add_input(ets, in);
    ets->add_option("--eps", eps, "allowed squared-overlap deficit, in (0, 1)")->required();
    ets->add_option("--seed", seed, "optimizer seed");
    ets->add_option("--restarts", restarts, "optimizer restarts per shape");

    std::string density;
    std::string density_file;
    std::optional<double> wprime;
    auto *wit = app.add_subcommand("witness", "maximal tree size witness");
    auto *wg = wit->add_option_group("input");
    wg->add_option("--density", density, "density JSON {\"n\":4,\"mat\":[[[re,im],..],..]}");
    wg->add_option("--file", density_file, "file holding density JSON");
    wg->add_option("--from-wprime", wprime, "measured <W'> with W' = 3/4 I - |Psi4><Psi4|");
    wg->require_option(0, 1);

    double p = 0.0;
    auto *wer = app.add_subcommand("werner", "tree size of the generalized Werner state");
    wer->add_option("--p", p, "GHZ weight in [0, 1]")->required();

    int max_leaves = 16;
    auto *orc = app.add_subcommand("oracle", "smallest shape fitting the state (optimizer search)");
    add_input(orc, in);
    orc->add_option("--max-leaves", max_leaves, "largest shape size to try")->required();
    orc->add_option("--seed", seed, "optimizer seed");
    orc->add_option("--restarts", restarts, "optimizer restarts per shape");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*parse) {
            const auto t = input_tree(in);
            emit({{"size", size(t)},
                  {"shape", shape_key(shape_of(t))},
                  {"braket", print_braket(t)},
                  {"tree", to_json(t)}});
        } else if (*eval) {
            emit(to_json(evaluate(input_tree(in))));
        } else if (*classify) {
            const auto s = input_state(in);
            if (s.n_qubits() == 2) {
                emit({{"class", to_string(classify2(s))}});
            } else if (s.n_qubits() == 3) {
                emit(to_json(classify3(s)));
            } else {
                throw Unsupported("classify handles two or three qubits");
            }
        } else if (*ts) {
            TsOptions o;
            o.use_oracle = use_oracle;
            o.opt = opt_from(seed, restarts);
            emit(to_json(tree_size(input_state(in), o)));
        } else if (*dec) {
            const auto r = tree_size(input_state(in));
            emit({{"size", r.upper},
                  {"exact", r.exact},
                  {"braket", print_braket(r.tree)},
                  {"tree", to_json(r.tree)}});
        } else if (*irr) {
            emit(to_json(is_irreducible(input_state(in))));
        } else if (*ets) {
            const auto s = input_state(in);
            const auto r = epsilon_ts_detail(s, eps, opt_from(seed, restarts));
            emit({{"eps", eps}, {"epsilon_ts", r.size}, {"shape", r.shape}, {"best_overlap", r.best_overlap}});
        } else if (*wit) {
            if (wprime) {
                emit(to_json(witness_from_wprime(*wprime)));
            } else {
                std::string text = density;
                if (text.empty()) {
                    if (!density_file.empty()) {
                        std::ifstream f(density_file);
                        if (!f) {
                            throw InputError("cannot open " + density_file);
                        }
                        text = slurp(f);
                    } else {
                        text = slurp(std::cin);
                    }
                }
                emit(to_json(witness_eval(density_from_json(parse_json(text)))));
            }
        } else if (*wer) {
            Json j = {{"p", p}};
            j.update(to_json(werner_ts(p)));
            j["note"] = "tree size is not monotone in p: 8 on W\\B, then 6 on GHZ\\W";
            emit(j);
        } else if (*orc) {
            const auto r = ts_oracle(input_state(in), max_leaves, opt_from(seed, restarts));
            emit({{"ts", optional_int(r.size)},
                  {"found", r.size.has_value()},
                  {"shape", r.size ? Json(r.shape) : Json(nullptr)},
                  {"best_overlap", r.best_overlap},
                  {"shapes_tried", r.shapes_tried}});
        }
    } catch (const InputError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const Degenerate &e) {
        std::cerr << "degenerate: " << e.what() << '\n';
        return 3;
    } catch (const BudgetExceeded &e) {
        std::cerr << "budget exceeded: " << e.what() << '\n';
        return 3;
    } catch (const std::exception &e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
