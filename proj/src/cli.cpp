#include "stablecrd/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <iomanip>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "stablecrd/config_index.hpp"
#include "stablecrd/minu.hpp"
#include "stablecrd/reach_oracle.hpp"
#include "stablecrd/textio.hpp"

namespace stablecrd::cli {

namespace {

constexpr const char* kCaveat =
    "note: min(U) is complete only if the CRD is output stable; this is assumed, not checked";

struct CommandConfig {
    std::string file;
    std::vector<std::string> configs;
    std::string format = "text";
    std::string index = "tree";
    std::string mode = "o";
    std::string what = "minu";
    std::string minu_cache;
    std::string golden;
    std::string output;
    std::optional<Count> size_cap;
    std::size_t element_cap = kDefaultElementCap;
    std::optional<Count> max_size;
    std::size_t cap = kDefaultReachCap;
};

unsigned threads_from_env() {
    const char* env = std::getenv("STABLECRD_THREADS");
    if (!env || !*env) return 1;
    try {
        return static_cast<unsigned>(std::stoul(env));
    } catch (const std::exception&) {
        throw PreconditionError("STABLECRD_THREADS must be a nonnegative integer");
    }
}

std::string basename_of(const std::string& path) {
    auto slash = path.find_last_of('/');
    return slash == std::string::npos ? path : path.substr(slash + 1);
}

std::string summary(const Crd& crd) {
    std::size_t n = crd.reactions().size();
    return std::string(to_string(classify(crd))) + ", " + std::to_string(crd.dim()) +
           " species, " + std::to_string(n) + (n == 1 ? " reaction" : " reactions");
}

std::string stability_word(const StabilityVerdict& v) {
    std::string prefix = v.kind == StabilityKind::Output ? "o-" : "t-";
    return prefix + (v.stable ? "stable" : "unstable");
}

std::string names_of(const Crd& crd, bool (*keep)(const Crd&, SpeciesId)) {
    std::string out;
    for (SpeciesId s = 0; s < crd.dim(); ++s) {
        if (!keep(crd, s)) continue;
        if (!out.empty()) out += ", ";
        out += crd.species().name(s);
    }
    return out.empty() ? "(none)" : out;
}

GenOptions gen_options(const CommandConfig& cfg) {
    GenOptions opts;
    opts.size_cap = cfg.size_cap;
    opts.element_cap = cfg.element_cap;
    opts.backend = parse_backend(cfg.index);
    opts.threads = threads_from_env();
    return opts;
}

void print_antichain_text(const std::vector<Configuration>& list, const SpeciesTable& table,
                          std::ostream& out) {
    for (const Configuration& c : list) out << format_config(c, table) << '\n';
}

std::string layers_text(const GenStats& stats) {
    std::string out;
    for (const auto& [size, count] : stats.layers) {
        if (!out.empty()) out += ' ';
        out += std::to_string(size) + ":" + std::to_string(count);
    }
    return out.empty() ? "(none)" : out;
}

// ---------------------------------------------------------------------------

int cmd_validate(const CommandConfig& cfg, std::ostream& out) {
    Crd crd = load_crd_file(cfg.file);
    bool protocol = cfg.file.size() >= 3 && cfg.file.substr(cfg.file.size() - 3) == ".pp";
    if (cfg.format == "json") {
        Json j = Json::object();
        j["schema"] = kSchemaVersion;
        j["kind"] = "validate";
        j["file"] = basename_of(cfg.file);
        j["source"] = protocol ? "protocol" : "crd";
        j["class"] = to_string(classify(crd));
        j["crd_hash"] = crd_hash(crd);
        j["species"] = crd.species().names();
        j["reactions"] = crd.reactions().size();
        j["mute_reactions"] = std::count_if(crd.reactions().begin(), crd.reactions().end(),
                                            [](const Reaction& r) { return r.mute(); });
        Json inputs = Json::array(), yes = Json::array(), no = Json::array();
        for (SpeciesId s = 0; s < crd.dim(); ++s) {
            const auto& name = crd.species().name(s);
            if (crd.is_input(s)) inputs.push_back(name);
            (crd.votes_yes(s) ? yes : no).push_back(name);
        }
        j["inputs"] = inputs;
        j["yes"] = yes;
        j["no"] = no;
        out << j.dump(2) << '\n';
        return kOk;
    }
    out << basename_of(cfg.file) << ": " << (protocol ? "imported protocol, " : "")
        << summary(crd) << '\n';
    out << "  species: " << names_of(crd, [](const Crd&, SpeciesId) { return true; }) << '\n';
    out << "  inputs: " << names_of(crd, [](const Crd& c, SpeciesId s) { return c.is_input(s); })
        << '\n';
    out << "  yes: " << names_of(crd, [](const Crd& c, SpeciesId s) { return c.votes_yes(s); })
        << '\n';
    out << "  no: " << names_of(crd, [](const Crd& c, SpeciesId s) { return !c.votes_yes(s); })
        << '\n';
    for (std::size_t k = 0; k < crd.reactions().size(); ++k) {
        const Reaction& rxn = crd.reactions()[k];
        out << "  r" << k << ": " << format_reaction(rxn, crd.species())
            << (rxn.mute() ? "  (mute)" : "") << '\n';
    }
    return kOk;
}

int cmd_minu(const CommandConfig& cfg, std::ostream& out, std::ostream& err) {
    Crd crd = load_crd_file(cfg.file);
    GenResult result = gen_min_unstable(crd, gen_options(cfg));
    err << kCaveat << '\n';

    std::ostringstream doc;
    if (cfg.format == "json") {
        doc << gen_result_to_json(result, crd).dump(2) << '\n';
    } else {
        doc << "# min(U) of " << basename_of(cfg.file) << " (" << summary(crd) << ")\n";
        print_antichain_text(result.min_unstable.canonical_list(), crd.species(), doc);
        doc << "# elements: " << result.min_unstable.size()
            << "  truncated: " << (result.truncated ? "yes" : "no");
        if (result.complete_up_to) doc << "  complete up to size " << *result.complete_up_to;
        doc << "\n# layers (size:count): " << layers_text(result.stats) << '\n';
        doc << "# comparisons: " << result.stats.comparisons << " (" << cfg.index << " index)"
            << "  predecessor computations: " << result.stats.predecessor_computations << '\n';
        doc << "# wall time: " << std::fixed << std::setprecision(6)
            << result.stats.wall_time.count() << " s\n";
    }
    if (!cfg.output.empty()) {
        std::ofstream file(cfg.output, std::ios::binary);
        if (!file) throw Error("cannot write " + cfg.output);
        file << doc.str();
    } else {
        out << doc.str();
    }
    if (result.truncated) {
        err << "error: min(U) generation hit a cap; result is truncated\n";
        return kCapExceeded;
    }
    return kOk;
}

int cmd_check(const CommandConfig& cfg, std::ostream& out, std::ostream& err) {
    Crd crd = load_crd_file(cfg.file);
    std::vector<Configuration> configs;
    for (const std::string& literal : cfg.configs) {
        Configuration c(crd.dim());
        try {
            c = parse_config(literal, crd.species());
        } catch (const ParseError& e) {
            throw Error("invalid configuration '" + literal + "': " + e.what());
        }
        if (c.is_zero()) throw ZeroConfigurationError();
        configs.push_back(std::move(c));
    }
    const bool json = cfg.format == "json";

    if (cfg.mode == "t") {
        for (const Configuration& c : configs) {
            StabilityVerdict v = is_t_stable(crd, c);
            if (json)
                out << verdict_to_json(v, c, crd.species()).dump() << '\n';
            else
                out << format_config(c, crd.species()) << ": " << stability_word(v) << '\n';
        }
        return kOk;
    }

    std::optional<GenResult> result;
    IndexBackend backend = parse_backend(cfg.index);
    if (!cfg.minu_cache.empty()) {
        result = gen_result_from_json(Json::parse(read_file(cfg.minu_cache)), crd, true, backend);
    } else {
        result = gen_min_unstable(crd, gen_options(cfg));
        err << kCaveat << '\n';
    }

    int code = kOk;
    for (const Configuration& c : configs) {
        bool stable;
        try {
            stable = check_o_stable(*result, c);
        } catch (const UncertifiableError& e) {
            err << "error: " << format_config(c, crd.species()) << ": " << e.what() << '\n';
            code = kUncertifiable;
            continue;
        }
        StabilityVerdict v{stable, StabilityKind::Output, std::nullopt};
        if (json)
            out << verdict_to_json(v, c, crd.species()).dump() << '\n';
        else
            out << format_config(c, crd.species()) << ": " << stability_word(v) << '\n';
    }
    return code;
}

GenResult oracle_as_result(const Crd& crd, Count max_size, std::size_t cap) {
    GenResult r{oracle_min_unstable(crd, max_size, cap), {}, true, max_size};
    std::map<Count, std::size_t> layers;
    for (const Configuration& c : r.min_unstable.elements()) ++layers[c.size()];
    r.stats.layers.assign(layers.begin(), layers.end());
    r.stats.comparisons = 0;
    return r;
}

int cmd_oracle(const CommandConfig& cfg, std::ostream& out) {
    Crd crd = load_crd_file(cfg.file);
    const Count k = *cfg.max_size;
    const bool json = cfg.format == "json";
    const StabilityKind mode = cfg.mode == "t" ? StabilityKind::Total : StabilityKind::Output;

    if (cfg.what == "minu") {
        GenResult r = oracle_as_result(crd, k, cfg.cap);
        if (json) {
            Json j = gen_result_to_json(r, crd);
            j["index"] = "oracle";
            out << j.dump(2) << '\n';
        } else {
            out << "# oracle min(U) restricted to size <= " << k << " of "
                << basename_of(cfg.file) << '\n';
            print_antichain_text(r.min_unstable.canonical_list(), crd.species(), out);
            out << "# elements: " << r.min_unstable.size() << '\n';
        }
        return kOk;
    }

    if (cfg.what == "stability") {
        Json verdicts = Json::array();
        for (Count size = 1; size <= k; ++size) {
            for (const Configuration& c : configurations_of_size(crd.dim(), size)) {
                StabilityVerdict v = mode == StabilityKind::Output
                                         ? oracle_is_o_stable(crd, c, cfg.cap)
                                         : is_t_stable(crd, c);
                if (json) {
                    verdicts.push_back(verdict_to_json(v, c, crd.species()));
                } else {
                    out << format_config(c, crd.species()) << ": " << stability_word(v) << '\n';
                }
            }
        }
        if (json) {
            Json j = Json::object();
            j["schema"] = kSchemaVersion;
            j["kind"] = "stability";
            j["species"] = crd.species().names();
            j["mode"] = cfg.mode;
            j["max_size"] = k;
            j["verdicts"] = std::move(verdicts);
            out << j.dump(2) << '\n';
        }
        return kOk;
    }

    DecidesReport report = oracle_decides(crd, k, mode, cfg.cap);
    if (json) {
        out << decides_to_json(report, crd, k, mode).dump(2) << '\n';
        return kOk;
    }
    if (report.decides) {
        out << "# " << basename_of(cfg.file) << " " << cfg.mode
            << "-stably decides on all inputs of size <= " << k << '\n';
        for (const DecidesRow& row : report.table)
            out << format_config(row.input, crd.species()) << ": " << to_string(row.verdict) << '\n';
    } else {
        const auto& cx = *report.counterexample;
        out << "# " << basename_of(cfg.file) << " does not " << cfg.mode << "-stably decide\n"
            << "initial: " << format_config(cx.initial, crd.species()) << '\n'
            << "config: " << format_config(cx.config, crd.species()) << '\n'
            << "reason: " << cx.reason << '\n';
    }
    return kOk;
}

int cmd_compare(const CommandConfig& cfg, std::ostream& out, std::ostream& err) {
    Crd crd = load_crd_file(cfg.file);
    const Count k = *cfg.max_size;

    GenResult fast = cfg.golden.empty()
                         ? gen_min_unstable(crd, gen_options(cfg))
                         : gen_result_from_json(Json::parse(read_file(cfg.golden)), crd, false,
                                                parse_backend(cfg.index));
    if (fast.truncated && fast.complete_up_to.value_or(0) < k) {
        err << "error: algorithm result is only complete up to size "
            << fast.complete_up_to.value_or(0) << "\n";
        return kCapExceeded;
    }
    std::vector<Configuration> algorithm;
    for (Configuration& c : fast.min_unstable.canonical_list())
        if (c.size() <= k) algorithm.push_back(std::move(c));
    std::vector<Configuration> oracle = oracle_min_unstable(crd, k, cfg.cap).canonical_list();

    std::vector<Configuration> only_algorithm, only_oracle;
    std::set_difference(algorithm.begin(), algorithm.end(), oracle.begin(), oracle.end(),
                        std::back_inserter(only_algorithm), CanonicalLess{});
    std::set_difference(oracle.begin(), oracle.end(), algorithm.begin(), algorithm.end(),
                        std::back_inserter(only_oracle), CanonicalLess{});

    const std::string label = cfg.golden.empty() ? "algorithm" : "golden";
    if (only_algorithm.empty() && only_oracle.empty()) {
        out << "PASS " << basename_of(cfg.file) << ": " << algorithm.size()
            << " minimal unstable configurations of size <= " << k << " agree with the oracle\n";
        return kOk;
    }
    out << "FAIL " << basename_of(cfg.file) << ": " << label << " and oracle differ at size <= "
        << k << '\n';
    for (const Configuration& c : only_algorithm)
        out << "- " << label << " only: " << format_config(c, crd.species()) << '\n';
    for (const Configuration& c : only_oracle)
        out << "+ oracle only: " << format_config(c, crd.species()) << '\n';
    return kMismatch;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Output-stability analysis for chemical reaction deciders", "stablecrd"};
    app.require_subcommand(1);
    CommandConfig cfg;

    auto add_format = [&](CLI::App* sub) {
        sub->add_option("--format", cfg.format, "Output format")
            ->check(CLI::IsMember({"text", "json"}));
    };
    auto add_index = [&](CLI::App* sub) {
        sub->add_option("--index", cfg.index, "Dominance index backend")
            ->check(CLI::IsMember({"naive", "tree"}));
    };
    auto add_caps = [&](CLI::App* sub) {
        sub->add_option("--size-cap", cfg.size_cap, "Stop after this configuration size");
        sub->add_option("--element-cap", cfg.element_cap, "Stop after this many elements")
            ->check(CLI::PositiveNumber);
    };

    auto* validate = app.add_subcommand("validate", "Parse a .crd/.pp file and summarise it");
    validate->add_option("file", cfg.file)->required();
    add_format(validate);

    auto* minu = app.add_subcommand("minu", "Compute the minimal output-unstable configurations");
    minu->add_option("file", cfg.file)->required();
    add_index(minu);
    add_caps(minu);
    add_format(minu);
    minu->add_option("-o,--output", cfg.output, "Write the report to a file (cacheable with --format json)");

    auto* check = app.add_subcommand("check", "Classify configurations as stable or unstable");
    check->add_option("file", cfg.file)->required();
    check->add_option("configs", cfg.configs, "Configuration literals such as '2A + B'")
        ->required();
    check->add_option("--minu", cfg.minu_cache, "Cached min(U) report (JSON)");
    check->add_option("--mode", cfg.mode)->check(CLI::IsMember({"o", "t"}));
    add_index(check);
    add_caps(check);
    add_format(check);

    auto* oracle = app.add_subcommand("oracle", "Exhaustive ground-truth analyses");
    oracle->add_option("file", cfg.file)->required();
    oracle->add_option("--max-size", cfg.max_size)->required()->check(CLI::PositiveNumber);
    oracle->add_option("--what", cfg.what)->check(CLI::IsMember({"minu", "stability", "decides"}));
    oracle->add_option("--mode", cfg.mode)->check(CLI::IsMember({"o", "t"}));
    oracle->add_option("--cap", cfg.cap, "Reachable-set cap per search")->check(CLI::PositiveNumber);
    add_format(oracle);

    auto* compare = app.add_subcommand("compare", "Diff the algorithm against the oracle");
    compare->add_option("file", cfg.file)->required();
    compare->add_option("--max-size", cfg.max_size)->required()->check(CLI::PositiveNumber);
    compare->add_option("--golden", cfg.golden, "Compare a stored min(U) report instead");
    compare->add_option("--cap", cfg.cap)->check(CLI::PositiveNumber);
    add_index(compare);
    add_caps(compare);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kParseError;
    }

    try {
        if (validate->parsed()) return cmd_validate(cfg, out);
        if (minu->parsed()) return cmd_minu(cfg, out, err);
        if (check->parsed()) return cmd_check(cfg, out, err);
        if (oracle->parsed()) return cmd_oracle(cfg, out);
        if (compare->parsed()) return cmd_compare(cfg, out, err);
    } catch (const ParseError& e) {
        for (const Diagnostic& d : e.diagnostics())
            err << cfg.file << ':' << d.line << ':' << d.column << ": error: " << d.message << '\n';
        return kParseError;
    } catch (const UnsupportedClassError& e) {
        err << "error: " << e.what() << '\n';
        return kUnsupportedClass;
    } catch (const CapExceededError& e) {
        err << "error: " << e.what() << '\n';
        return kCapExceeded;
    } catch (const UncertifiableError& e) {
        err << "error: " << e.what() << '\n';
        return kUncertifiable;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kParseError;
    }
    return kParseError;
}

}  // namespace stablecrd::cli
