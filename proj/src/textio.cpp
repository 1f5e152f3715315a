#include "stablecrd/textio.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace stablecrd {

ParseError::ParseError(std::vector<Diagnostic> diagnostics)
    : Error([&] {
          std::ostringstream msg;
          for (std::size_t i = 0; i < diagnostics.size(); ++i) {
              if (i) msg << '\n';
              msg << diagnostics[i].line << ':' << diagnostics[i].column << ": "
                  << diagnostics[i].message;
          }
          return msg.str();
      }()),
      diagnostics_(std::move(diagnostics)) {}

namespace {

bool is_ident_start(char ch) { return std::isalpha(static_cast<unsigned char>(ch)) != 0; }
bool is_ident_char(char ch) {
    return std::isalnum(static_cast<unsigned char>(ch)) != 0 || ch == '_';
}
bool is_space(char ch) { return ch == ' ' || ch == '\t' || ch == '\r'; }

struct SourceLine {
    std::size_t number;
    std::string text;  // comment stripped
};

std::vector<SourceLine> split_lines(std::string_view text) {
    std::vector<SourceLine> lines;
    std::size_t number = 1, start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string line(text.substr(start, end - start));
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        lines.push_back({number++, std::move(line)});
        start = end + 1;
    }
    return lines;
}

bool blank(const std::string& s) {
    return std::all_of(s.begin(), s.end(), is_space);
}

// Diagnostic sink plus a cursor over one line.
class LineParser {
public:
    LineParser(const SourceLine& line, std::size_t begin, std::size_t end,
               std::vector<Diagnostic>& diags)
        : line_(line), pos_(begin), end_(end), diags_(diags) {}

    void skip_space() {
        while (pos_ < end_ && is_space(line_.text[pos_])) ++pos_;
    }
    bool at_end() {
        skip_space();
        return pos_ >= end_;
    }
    char peek() {
        skip_space();
        return pos_ < end_ ? line_.text[pos_] : '\0';
    }
    std::size_t column() const { return pos_ + 1; }
    std::size_t pos() const { return pos_; }
    void advance() { ++pos_; }

    void error(std::size_t column, std::string message) {
        diags_.push_back({line_.number, column, std::move(message)});
    }

    std::optional<std::string> identifier() {
        skip_space();
        if (pos_ >= end_ || !is_ident_start(line_.text[pos_])) {
            error(column(), "expected a species name");
            return std::nullopt;
        }
        std::size_t start = pos_;
        while (pos_ < end_ && is_ident_char(line_.text[pos_])) ++pos_;
        return line_.text.substr(start, pos_ - start);
    }

    // term (+ term)*, or "0" when `allow_zero`. Unknown species are reported
    // against `table`.
    std::optional<Configuration> terms(const SpeciesTable& table, bool allow_zero) {
        Configuration out(table.size());
        bool ok = true;
        skip_space();
        if (allow_zero && pos_ < end_ && line_.text[pos_] == '0') {
            std::size_t probe = pos_ + 1;
            while (probe < end_ && is_space(line_.text[probe])) ++probe;
            if (probe >= end_) {
                pos_ = end_;
                return out;
            }
        }
        while (true) {
            skip_space();
            std::size_t term_col = column();
            Count mult = 1;
            if (pos_ < end_ && std::isdigit(static_cast<unsigned char>(line_.text[pos_]))) {
                std::size_t start = pos_;
                while (pos_ < end_ && std::isdigit(static_cast<unsigned char>(line_.text[pos_])))
                    ++pos_;
                std::string digits = line_.text.substr(start, pos_ - start);
                try {
                    mult = std::stoull(digits);
                } catch (const std::exception&) {
                    error(term_col, "multiplicity out of range");
                    return std::nullopt;
                }
                if (mult == 0) {
                    error(term_col, "multiplicity must be positive");
                    ok = false;
                }
            }
            std::size_t name_col = (skip_space(), column());
            auto name = identifier();
            if (!name) return std::nullopt;
            auto id = table.find(*name);
            if (!id) {
                error(name_col, "undeclared species " + *name);
                ok = false;
            } else if (mult > 0) {
                out.add(*id, mult);
            }
            if (at_end()) break;
            if (peek() != '+') {
                error(column(), "expected '+' between terms");
                return std::nullopt;
            }
            advance();
        }
        if (!ok) return std::nullopt;
        return out;
    }

private:
    const SourceLine& line_;
    std::size_t pos_, end_;
    std::vector<Diagnostic>& diags_;
};

struct NameRef {
    std::string name;
    std::size_t line, column;
};

// Comma separated identifiers (possibly empty).
std::vector<NameRef> parse_name_list(const SourceLine& line, std::size_t begin,
                                     std::vector<Diagnostic>& diags) {
    std::vector<NameRef> out;
    LineParser p(line, begin, line.text.size(), diags);
    if (p.at_end()) return out;
    while (true) {
        std::size_t col = (p.skip_space(), p.column());
        auto name = p.identifier();
        if (!name) return out;
        out.push_back({*name, line.number, col});
        if (p.at_end()) break;
        if (p.peek() != ',') {
            p.error(p.column(), "expected ',' between names");
            return out;
        }
        p.advance();
    }
    return out;
}

struct Header {
    std::string key;
    std::size_t value_begin;
};

std::optional<Header> header_of(const std::string& text) {
    std::size_t i = 0;
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t start = i;
    while (i < text.size() && std::isalpha(static_cast<unsigned char>(text[i]))) ++i;
    if (i == start) return std::nullopt;
    std::string key = text.substr(start, i - start);
    while (i < text.size() && is_space(text[i])) ++i;
    if (i >= text.size() || text[i] != ':') return std::nullopt;
    return Header{key, i + 1};
}

// Shared front half of the .crd and .pp parsers: header sections plus the
// body lines that follow the rule section keyword.
struct Sections {
    std::optional<SpeciesTable> species;
    std::vector<NameRef> species_refs;
    std::vector<NameRef> inputs, yes, no;
    std::vector<const SourceLine*> rules;
};

Sections parse_sections(const std::vector<SourceLine>& lines, std::string_view species_key,
                        std::string_view rules_key, std::vector<Diagnostic>& diags) {
    Sections s;
    bool in_rules = false;
    bool species_seen = false;
    for (const SourceLine& line : lines) {
        if (blank(line.text)) continue;
        auto header = header_of(line.text);
        if (!header) {
            if (in_rules) {
                s.rules.push_back(&line);
            } else {
                std::size_t col = 1;
                while (col <= line.text.size() && is_space(line.text[col - 1])) ++col;
                diags.push_back({line.number, col,
                                 "expected a section header before this line"});
            }
            continue;
        }
        const std::string& key = header->key;
        if (key == species_key) {
            if (species_seen) {
                diags.push_back({line.number, 1, "duplicate species declaration"});
                continue;
            }
            species_seen = true;
            s.species_refs = parse_name_list(line, header->value_begin, diags);
        } else if (key == "inputs") {
            auto refs = parse_name_list(line, header->value_begin, diags);
            s.inputs.insert(s.inputs.end(), refs.begin(), refs.end());
        } else if (key == "yes") {
            auto refs = parse_name_list(line, header->value_begin, diags);
            s.yes.insert(s.yes.end(), refs.begin(), refs.end());
        } else if (key == "no") {
            auto refs = parse_name_list(line, header->value_begin, diags);
            s.no.insert(s.no.end(), refs.begin(), refs.end());
        } else if (key == rules_key) {
            in_rules = true;
            if (!blank(line.text.substr(header->value_begin)))
                diags.push_back({line.number, header->value_begin + 1,
                                 "rules start on the line after '" + std::string(rules_key) +
                                     ":'"});
        } else {
            diags.push_back({line.number, 1, "unknown section '" + key + "'"});
        }
    }

    if (!species_seen) {
        diags.push_back({1, 1, "missing '" + std::string(species_key) + ":' declaration"});
        return s;
    }
    std::vector<std::string> names;
    std::set<std::string> unique;
    for (const NameRef& ref : s.species_refs) {
        if (!unique.insert(ref.name).second) {
            diags.push_back({ref.line, ref.column, "duplicate species declaration " + ref.name});
            continue;
        }
        names.push_back(ref.name);
    }
    if (names.empty()) {
        diags.push_back({1, 1, "at least one species must be declared"});
        return s;
    }
    s.species = SpeciesTable(std::move(names));
    return s;
}

struct Votes {
    std::vector<SpeciesId> inputs;
    std::vector<bool> yes;
};

Votes resolve_votes(const Sections& s, std::vector<Diagnostic>& diags) {
    const SpeciesTable& table = *s.species;
    Votes out;
    out.yes.assign(table.size(), false);
    std::vector<int> voted(table.size(), 0);
    std::vector<const NameRef*> first_vote(table.size(), nullptr);

    auto resolve = [&](const NameRef& ref) -> std::optional<SpeciesId> {
        auto id = table.find(ref.name);
        if (!id) diags.push_back({ref.line, ref.column, "undeclared species " + ref.name});
        return id;
    };
    for (const NameRef& ref : s.inputs)
        if (auto id = resolve(ref)) out.inputs.push_back(*id);
    for (bool yes : {true, false}) {
        for (const NameRef& ref : yes ? s.yes : s.no) {
            auto id = resolve(ref);
            if (!id) continue;
            if (voted[*id]++) {
                diags.push_back({ref.line, ref.column, "species " + ref.name + " voted twice"});
                continue;
            }
            out.yes[*id] = yes;
        }
    }
    for (const NameRef& ref : s.species_refs) {
        auto id = table.find(ref.name);
        if (id && voted[*id] == 0) {
            diags.push_back({ref.line, ref.column, "species " + ref.name + " has no vote"});
            voted[*id] = 1;  // report once
        }
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// .crd

Crd parse_crd(std::string_view text) {
    std::vector<Diagnostic> diags;
    auto lines = split_lines(text);
    Sections s = parse_sections(lines, "species", "reactions", diags);
    if (!s.species) throw ParseError(std::move(diags));
    Votes votes = resolve_votes(s, diags);

    std::vector<Reaction> reactions;
    for (const SourceLine* line : s.rules) {
        std::size_t arrow = line->text.find("->");
        if (arrow == std::string::npos) {
            diags.push_back({line->number, 1, "expected '->' in reaction"});
            continue;
        }
        LineParser lhs(*line, 0, arrow, diags);
        auto r = lhs.terms(*s.species, false);
        LineParser rhs(*line, arrow + 2, line->text.size(), diags);
        if (rhs.at_end()) {
            rhs.error(arrow + 3, "empty product side (write 0)");
            continue;
        }
        auto p = rhs.terms(*s.species, true);
        if (r && p) reactions.emplace_back(std::move(*r), std::move(*p));
    }
    if (!diags.empty()) throw ParseError(std::move(diags));
    return Crd(std::move(*s.species), std::move(reactions), std::move(votes.inputs),
               std::move(votes.yes));
}

std::string format_config(const Configuration& c, const SpeciesTable& table) {
    if (c.is_zero()) return "0";
    std::string out;
    for (SpeciesId s = 0; s < c.dim(); ++s) {
        if (c[s] == 0) continue;
        if (!out.empty()) out += " + ";
        if (c[s] != 1) out += std::to_string(c[s]);
        out += table.name(s);
    }
    return out;
}

std::string format_reaction(const Reaction& rxn, const SpeciesTable& table) {
    return format_config(rxn.reactants(), table) + " -> " + format_config(rxn.products(), table);
}

static std::string join_names(const SpeciesTable& table, const std::vector<SpeciesId>& ids) {
    std::string out;
    for (SpeciesId id : ids) {
        if (!out.empty()) out += ", ";
        out += table.name(id);
    }
    return out;
}

std::string serialize_crd(const Crd& crd) {
    const SpeciesTable& table = crd.species();
    std::vector<SpeciesId> all, yes, no;
    for (SpeciesId s = 0; s < crd.dim(); ++s) {
        all.push_back(s);
        (crd.votes_yes(s) ? yes : no).push_back(s);
    }
    auto line = [](std::string key, const std::string& value) {
        return value.empty() ? key + ":\n" : key + ": " + value + "\n";
    };
    std::string out = line("species", join_names(table, all)) +
                      line("inputs", join_names(table, crd.inputs())) +
                      line("yes", join_names(table, yes)) + line("no", join_names(table, no)) +
                      "reactions:\n";
    for (const Reaction& rxn : crd.reactions()) out += format_reaction(rxn, table) + "\n";
    return out;
}

Configuration parse_config(std::string_view text, const SpeciesTable& table) {
    std::vector<Diagnostic> diags;
    SourceLine line{1, std::string(text)};
    if (line.text.find('\n') != std::string::npos)
        throw ParseError({{1, line.text.find('\n') + 1, "configuration must be one line"}});
    LineParser p(line, 0, line.text.size(), diags);
    if (p.at_end()) throw ParseError({{1, 1, "empty configuration (write 0)"}});
    auto c = p.terms(table, true);
    if (!c || !diags.empty()) throw ParseError(std::move(diags));
    return *c;
}

// ---------------------------------------------------------------------------
// .pp

ProtocolTable parse_protocol(std::string_view text) {
    std::vector<Diagnostic> diags;
    auto lines = split_lines(text);
    Sections s = parse_sections(lines, "states", "transitions", diags);
    if (!s.species) throw ParseError(std::move(diags));
    Votes votes = resolve_votes(s, diags);

    ProtocolTable table{*s.species, {}, std::move(votes.inputs), std::move(votes.yes)};
    std::map<std::pair<SpeciesId, SpeciesId>, std::size_t> defined;

    auto state_pair = [&](const SourceLine& line, std::size_t begin, std::size_t end)
        -> std::optional<std::pair<SpeciesId, SpeciesId>> {
        std::string inner = line.text.substr(begin, end - begin);
        // Optional surrounding parentheses.
        auto open = inner.find('('), close = inner.rfind(')');
        SourceLine stripped = line;
        if (open != std::string::npos && close != std::string::npos && close > open) {
            stripped.text[begin + open] = ' ';
            stripped.text[begin + close] = ' ';
        }
        LineParser p(stripped, begin, end, diags);
        std::array<SpeciesId, 2> ids{};
        for (int k = 0; k < 2; ++k) {
            std::size_t col = (p.skip_space(), p.column());
            auto name = p.identifier();
            if (!name) return std::nullopt;
            auto id = s.species->find(*name);
            if (!id) {
                p.error(col, "undeclared state " + *name);
                return std::nullopt;
            }
            ids[k] = *id;
            if (k == 0) {
                if (p.peek() != ',') {
                    p.error(p.column(), "expected ',' between states");
                    return std::nullopt;
                }
                p.advance();
            }
        }
        if (!p.at_end()) {
            p.error(p.column(), "unexpected text after state pair");
            return std::nullopt;
        }
        return std::make_pair(ids[0], ids[1]);
    };

    for (const SourceLine* line : s.rules) {
        std::size_t arrow = line->text.find("->");
        if (arrow == std::string::npos) {
            diags.push_back({line->number, 1, "expected '->' in transition"});
            continue;
        }
        auto in = state_pair(*line, 0, arrow);
        auto out = state_pair(*line, arrow + 2, line->text.size());
        if (!in || !out) continue;
        if (defined.count(*in)) {
            diags.push_back({line->number, 1,
                             "transition for (" + s.species->name(in->first) + ", " +
                                 s.species->name(in->second) + ") defined twice"});
            continue;
        }
        defined[*in] = table.delta.size();
        table.delta.push_back({in->first, in->second, out->first, out->second});
    }
    if (!diags.empty()) throw ParseError(std::move(diags));
    return table;
}

Crd import_protocol(const ProtocolTable& table) {
    const std::size_t dim = table.states.size();
    std::vector<Reaction> reactions;
    for (const Transition& t : table.delta) {
        Configuration r(dim), p(dim);
        r.add(t.first, 1);
        r.add(t.second, 1);
        p.add(t.first_out, 1);
        p.add(t.second_out, 1);
        Reaction rxn(std::move(r), std::move(p));
        if (std::find(reactions.begin(), reactions.end(), rxn) == reactions.end())
            reactions.push_back(std::move(rxn));
    }
    return Crd(table.states, std::move(reactions), table.inputs, table.yes_votes);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Crd load_crd_file(const std::string& path) {
    std::string text = read_file(path);
    bool protocol = path.size() >= 3 && path.compare(path.size() - 3, 3, ".pp") == 0;
    return protocol ? import_protocol(parse_protocol(text)) : parse_crd(text);
}

std::string crd_hash(const Crd& crd) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : serialize_crd(crd)) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i, h >>= 4) out[i] = digits[h & 0xf];
    return out;
}

// ---------------------------------------------------------------------------
// JSON

Json config_to_json(const Configuration& c, const SpeciesTable& table) {
    Json j = Json::object();
    for (SpeciesId s = 0; s < c.dim(); ++s)
        if (c[s] != 0) j[table.name(s)] = c[s];
    return j;
}

Configuration config_from_json(const Json& j, const SpeciesTable& table) {
    if (!j.is_object()) throw Error("configuration must be a JSON object");
    Configuration c(table.size());
    for (const auto& [name, count] : j.items()) {
        auto id = table.find(name);
        if (!id) throw Error("unknown species '" + name + "' in JSON configuration");
        if (!count.is_number_unsigned() || count.get<Count>() == 0)
            throw Error("counts in JSON configurations must be positive integers");
        c.add(*id, count.get<Count>());
    }
    return c;
}

Json antichain_to_json(const std::vector<Configuration>& canonical, const SpeciesTable& table) {
    Json arr = Json::array();
    for (const Configuration& c : canonical) arr.push_back(config_to_json(c, table));
    return arr;
}

Json verdict_to_json(const StabilityVerdict& v, const Configuration& c, const SpeciesTable& table) {
    Json j = Json::object();
    j["config"] = config_to_json(c, table);
    j[v.kind == StabilityKind::Output ? "o_stable" : "t_stable"] = v.stable;
    if (v.witness) {
        Json steps = Json::array();
        for (const WitnessStep& step : *v.witness)
            steps.push_back({{"reaction", step.reaction},
                             {"config", config_to_json(step.config, table)}});
        j["witness"] = std::move(steps);
    }
    return j;
}

static Json species_json(const SpeciesTable& table) {
    Json arr = Json::array();
    for (const auto& name : table.names()) arr.push_back(name);
    return arr;
}

Json gen_result_to_json(const GenResult& r, const Crd& crd) {
    Json j = Json::object();
    j["schema"] = kSchemaVersion;
    j["kind"] = "min_unstable";
    j["crd_hash"] = crd_hash(crd);
    j["species"] = species_json(crd.species());
    j["index"] = to_string(r.min_unstable.backend());
    j["truncated"] = r.truncated;
    j["complete_up_to"] = r.complete_up_to ? Json(*r.complete_up_to) : Json(nullptr);
    j["min_unstable"] = antichain_to_json(r.min_unstable.canonical_list(), crd.species());
    Json layers = Json::array();
    for (const auto& [size, count] : r.stats.layers) layers.push_back(Json::array({size, count}));
    j["stats"] = {{"comparisons", r.stats.comparisons},
                  {"predecessor_computations", r.stats.predecessor_computations},
                  {"layers", std::move(layers)}};
    return j;
}

GenResult gen_result_from_json(const Json& j, const Crd& crd, bool check_hash,
                               IndexBackend backend) {
    try {
        if (j.at("schema") != kSchemaVersion) throw Error("unsupported schema version");
        if (j.at("kind") != "min_unstable") throw Error("not a min(U) report");
        if (j.at("species") != species_json(crd.species()))
            throw Error("species list does not match the CRD");
        if (check_hash && j.at("crd_hash").get<std::string>() != crd_hash(crd))
            throw Error("cached min(U) was computed for a different CRD (hash mismatch)");
        GenResult r{Antichain(crd.dim(), backend), {}, false, std::nullopt};
        for (const Json& c : j.at("min_unstable"))
            r.min_unstable.insert(config_from_json(c, crd.species()));
        r.truncated = j.at("truncated").get<bool>();
        if (!j.at("complete_up_to").is_null())
            r.complete_up_to = j.at("complete_up_to").get<Count>();
        const Json& stats = j.at("stats");
        r.stats.comparisons = stats.at("comparisons").get<std::uint64_t>();
        r.stats.predecessor_computations = stats.at("predecessor_computations").get<std::uint64_t>();
        for (const Json& layer : stats.at("layers"))
            r.stats.layers.emplace_back(layer.at(0).get<Count>(), layer.at(1).get<std::size_t>());
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("malformed min(U) report: ") + e.what());
    }
}

Json decides_to_json(const DecidesReport& r, const Crd& crd, Count max_size, StabilityKind mode) {
    Json j = Json::object();
    j["schema"] = kSchemaVersion;
    j["kind"] = "decides";
    j["species"] = species_json(crd.species());
    Json inputs = Json::array();
    for (SpeciesId s : crd.inputs()) inputs.push_back(crd.species().name(s));
    j["inputs"] = std::move(inputs);
    j["mode"] = mode == StabilityKind::Output ? "o" : "t";
    j["max_size"] = max_size;
    j["decides"] = r.decides;
    Json table = Json::array();
    for (const DecidesRow& row : r.table)
        table.push_back({{"input", config_to_json(row.input, crd.species())},
                         {"verdict", to_string(row.verdict)}});
    j["table"] = std::move(table);
    if (r.counterexample) {
        j["counterexample"] = {{"initial", config_to_json(r.counterexample->initial, crd.species())},
                               {"config", config_to_json(r.counterexample->config, crd.species())},
                               {"reason", r.counterexample->reason}};
    }
    return j;
}

}  // namespace stablecrd
