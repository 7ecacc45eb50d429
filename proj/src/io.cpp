#include "hompart/io.hpp"

#include <fstream>
#include <limits>
#include <sstream>

using nlohmann::json;

namespace hompart {

IoError::IoError(int line, const std::string& msg)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
      line_(line) {}

namespace {

// Strips '#' comments, splits on whitespace, skips empty lines. lineno is
// 1-based and counts raw lines, so diagnostics point at the real file.
struct LineReader {
    std::istream& in;
    int lineno = 0;

    bool next(std::vector<std::string>& tok) {
        std::string raw;
        while (std::getline(in, raw)) {
            ++lineno;
            auto hash = raw.find('#');
            if (hash != std::string::npos) raw.resize(hash);
            tok.clear();
            std::istringstream ss(raw);
            std::string t;
            while (ss >> t) tok.push_back(t);
            if (!tok.empty()) return true;
        }
        return false;
    }
};

long long parse_int(const std::string& s, int line, const char* what) {
    std::size_t pos = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &pos);
    } catch (const std::exception&) {
        throw IoError(line, std::string(what) + ": expected an integer, got \"" + s + "\"");
    }
    if (pos != s.size())
        throw IoError(line, std::string(what) + ": trailing characters in \"" + s + "\"");
    return v;
}

int parse_id(const std::string& s, int line, const char* what, long long limit) {
    long long v = parse_int(s, line, what);
    if (v < 0 || v >= limit)
        throw IoError(line, std::string(what) + " " + std::to_string(v) + " out of range [0, " +
                                std::to_string(limit) + ")");
    return static_cast<int>(v);
}

int parse_size(const std::string& s, int line, const char* what) {
    long long v = parse_int(s, line, what);
    if (v < 0 || v > std::numeric_limits<int>::max())
        throw IoError(line, std::string(what) + " out of range");
    return static_cast<int>(v);
}

void want_tokens(const std::vector<std::string>& tok, std::size_t n, int line, const char* what) {
    if (tok.size() != n)
        throw IoError(line, std::string(what) + ": expected " + std::to_string(n) +
                                " fields, got " + std::to_string(tok.size()));
}

} // namespace

ThreeGraphFile read_three_graph(std::istream& in) {
    LineReader r{in};
    std::vector<std::string> tok;
    if (!r.next(tok)) throw IoError(0, "empty input, expected a 3graph header");
    if (tok[0] != "3graph")
        throw IoError(r.lineno, "expected header starting with \"3graph\", got \"" + tok[0] + "\"");
    if (tok.size() < 2) throw IoError(r.lineno, "3graph header needs a kind");

    ThreeGraphFile out;
    if (tok[1] == "tripartite") {
        want_tokens(tok, 5, r.lineno, "tripartite header");
        int nu = parse_size(tok[2], r.lineno, "nU");
        int nv = parse_size(tok[3], r.lineno, "nV");
        int nw = parse_size(tok[4], r.lineno, "nW");
        std::vector<std::array<int, 3>> edges;
        while (r.next(tok)) {
            want_tokens(tok, 3, r.lineno, "edge");
            edges.push_back({parse_id(tok[0], r.lineno, "u", nu),
                             parse_id(tok[1], r.lineno, "v", nv),
                             parse_id(tok[2], r.lineno, "w", nw)});
        }
        try {
            out.tripartite = TripartiteThreeGraph({"U", nu}, {"V", nv}, {"W", nw}, std::move(edges));
        } catch (const std::invalid_argument& e) {
            throw IoError(0, e.what());
        }
        out.is_tripartite = true;
    } else if (tok[1] == "general") {
        want_tokens(tok, 3, r.lineno, "general header");
        int n = parse_size(tok[2], r.lineno, "n");
        std::vector<std::array<int, 3>> edges;
        while (r.next(tok)) {
            want_tokens(tok, 3, r.lineno, "edge");
            std::array<int, 3> e{parse_id(tok[0], r.lineno, "vertex", n),
                                 parse_id(tok[1], r.lineno, "vertex", n),
                                 parse_id(tok[2], r.lineno, "vertex", n)};
            std::sort(e.begin(), e.end());
            if (e[0] == e[1] || e[1] == e[2])
                throw IoError(r.lineno, "edge must name three distinct vertices");
            edges.push_back(e);
        }
        try {
            out.general = GeneralThreeGraph(n, std::move(edges));
        } catch (const std::invalid_argument& e) {
            throw IoError(0, e.what());
        }
        out.is_tripartite = false;
    } else {
        throw IoError(r.lineno, "unknown 3graph kind \"" + tok[1] + "\"");
    }
    return out;
}

namespace {

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError(0, "cannot open " + path);
    return f;
}

} // namespace

ThreeGraphFile load_three_graph(const std::string& path) {
    auto f = open_or_throw(path);
    return read_three_graph(f);
}

void write_three_graph(std::ostream& out, const TripartiteThreeGraph& h) {
    out << "3graph tripartite " << h.nu() << ' ' << h.nv() << ' ' << h.nw() << '\n';
    for (const auto& e : h.edges()) out << e[0] << ' ' << e[1] << ' ' << e[2] << '\n';
}

void write_three_graph(std::ostream& out, const GeneralThreeGraph& h) {
    out << "3graph general " << h.n() << '\n';
    for (const auto& e : h.edges()) out << e[0] << ' ' << e[1] << ' ' << e[2] << '\n';
}

BipartiteGraph read_bipartite_graph(std::istream& in) {
    LineReader r{in};
    std::vector<std::string> tok;
    if (!r.next(tok)) throw IoError(0, "empty input, expected a graph header");
    if (tok[0] != "graph" || tok.size() < 2 || tok[1] != "bipartite")
        throw IoError(r.lineno, "expected header \"graph bipartite nA nB\"");
    want_tokens(tok, 4, r.lineno, "graph header");
    int na = parse_size(tok[2], r.lineno, "nA");
    int nb = parse_size(tok[3], r.lineno, "nB");
    BipartiteGraph g({"A", na}, {"B", nb});
    while (r.next(tok)) {
        want_tokens(tok, 2, r.lineno, "edge");
        g.add_edge(parse_id(tok[0], r.lineno, "a", na), parse_id(tok[1], r.lineno, "b", nb));
    }
    return g;
}

BipartiteGraph load_bipartite_graph(const std::string& path) {
    auto f = open_or_throw(path);
    return read_bipartite_graph(f);
}

void write_bipartite_graph(std::ostream& out, const BipartiteGraph& g) {
    out << "graph bipartite " << g.na() << ' ' << g.nb() << '\n';
    for (int a = 0; a < g.na(); ++a)
        g.row_a(a).for_each_set([&](std::size_t b) { out << a << ' ' << b << '\n'; });
}

EdgeColoredBipartiteGraph read_ecg(std::istream& in, bool default_to_zero) {
    LineReader r{in};
    std::vector<std::string> tok;
    if (!r.next(tok)) throw IoError(0, "empty input, expected an ecg header");
    if (tok[0] != "ecg") throw IoError(r.lineno, "expected header \"ecg nA nB r\"");
    want_tokens(tok, 4, r.lineno, "ecg header");
    int na = parse_size(tok[1], r.lineno, "nA");
    int nb = parse_size(tok[2], r.lineno, "nB");
    int rmax = parse_size(tok[3], r.lineno, "r");
    EdgeColoredBipartiteGraph g({"A", na}, {"B", nb}, rmax + 1);
    while (r.next(tok)) {
        want_tokens(tok, 3, r.lineno, "pair");
        int a = parse_id(tok[0], r.lineno, "a", na);
        int b = parse_id(tok[1], r.lineno, "b", nb);
        int c = parse_id(tok[2], r.lineno, "color", rmax + 1LL);
        if (g.color_of(a, b) != -1)
            throw IoError(r.lineno, "pair (" + std::to_string(a) + ", " + std::to_string(b) +
                                        ") colored twice");
        g.set_color(a, b, c);
    }
    for (int a = 0; a < na; ++a)
        for (int b = 0; b < nb; ++b)
            if (g.color_of(a, b) == -1) {
                if (!default_to_zero)
                    throw IoError(0, "pair (" + std::to_string(a) + ", " + std::to_string(b) +
                                         ") has no color and defaulting to E_0 is off");
                g.set_color(a, b, 0);
            }
    return g;
}

EdgeColoredBipartiteGraph load_ecg(const std::string& path, bool default_to_zero) {
    auto f = open_or_throw(path);
    return read_ecg(f, default_to_zero);
}

void write_ecg(std::ostream& out, const EdgeColoredBipartiteGraph& g) {
    out << "ecg " << g.na() << ' ' << g.nb() << ' ' << g.num_colors() - 1 << '\n';
    for (int a = 0; a < g.na(); ++a)
        for (int b = 0; b < g.nb(); ++b) {
            int c = g.color_of(a, b);
            if (c != -1) out << a << ' ' << b << ' ' << c << '\n';
        }
}

namespace {

json big_to_json(const bigint& v) {
    static const bigint lo = std::numeric_limits<long long>::min();
    static const bigint hi = std::numeric_limits<long long>::max();
    if (v >= lo && v <= hi) return static_cast<long long>(v);
    return v.str();
}

} // namespace

json to_json(const Ratio& r) { return {{"num", big_to_json(r.num())}, {"den", big_to_json(r.den())}}; }

json to_json(const Density& d) { return {{"num", d.num}, {"den", d.den}}; }

json partition_to_json(const Partition& p) {
    json blocks = json::array();
    for (std::size_t i = 0; i < p.size(); ++i) blocks.push_back(p.block(i));
    return {{"ground", p.ground().name}, {"blocks", std::move(blocks)}};
}

Partition partition_from_json(const json& j) {
    try {
        std::string ground = j.at("ground").get<std::string>();
        std::vector<std::vector<int>> blocks;
        for (const auto& b : j.at("blocks")) blocks.push_back(b.get<std::vector<int>>());
        int n = 0;
        for (const auto& b : blocks) n += static_cast<int>(b.size());
        return Partition({ground, n}, std::move(blocks));
    } catch (const json::exception& e) {
        throw IoError(0, std::string("partition json: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw IoError(0, std::string("partition json: ") + e.what());
    }
}

Partition load_partition(const std::string& path) {
    auto f = open_or_throw(path);
    json j;
    try {
        f >> j;
    } catch (const json::exception& e) {
        throw IoError(0, path + ": " + e.what());
    }
    return partition_from_json(j);
}

void save_json(const std::string& path, const json& j) {
    std::ofstream f(path);
    if (!f) throw IoError(0, "cannot write " + path);
    f << j.dump(2) << '\n';
}

namespace {

json witness_to_json(const std::optional<ShatterWitness>& w) {
    if (!w) return nullptr;
    return json{{"shattered", w->shattered}, {"witnesses", w->witnesses}};
}

json flags_to_json(const std::vector<TupleFlag>& flags) {
    json arr = json::array();
    for (const TupleFlag& f : flags) {
        json blocks = json::array({f.blocks[0], f.blocks[1]});
        if (f.blocks[2] != -1) blocks.push_back(f.blocks[2]);
        arr.push_back({{"blocks", std::move(blocks)},
                       {"density", to_json(f.d)},
                       {"good", f.good}});
    }
    return arr;
}

} // namespace

json to_json(const VcResult& r) {
    return {{"value", r.value}, {"capped", r.capped}, {"witness", witness_to_json(r.witness)}};
}

json to_json(const SvcResult& r) {
    return {{"value", r.value},
            {"capped", r.capped},
            {"worst_slice", r.worst_slice},
            {"witness", witness_to_json(r.witness)}};
}

json to_json(const HomogeneityAudit& a) {
    return {{"epsilon", a.epsilon.str()},
            {"good_mass", a.good_mass},
            {"total_mass", a.total_mass},
            {"fraction", to_json(a.fraction())},
            {"is_homogeneous", a.is_homogeneous},
            {"tuples_total", a.tuples_total},
            {"tuples_bad", a.tuples_bad},
            {"flags_complete", a.flags_complete},
            {"flags", flags_to_json(a.flags)},
            {"worst", flags_to_json(a.worst)}};
}

json to_json(const GoodSetAudit& a) {
    return {{"exceptional_pairs", a.exceptional_pairs},
            {"total_pairs", a.total_pairs},
            {"is_almost_good", a.is_almost_good}};
}

json to_json(const GoodnessAudit& a) {
    json blocks = json::array();
    for (const GoodSetAudit& b : a.block_audits) blocks.push_back(to_json(b));
    return {{"covered", a.covered},
            {"part_size", a.part_size},
            {"is_almost_good", a.is_almost_good},
            {"blocks", std::move(blocks)}};
}

json decomposition_to_json(const TripartiteDecomposition& d) {
    auto matrix = [](int ni, int nj, auto&& cls) {
        json rows = json::array();
        for (int i = 0; i < ni; ++i) {
            json row = json::array();
            for (int j = 0; j < nj; ++j) row.push_back(cls(i, j));
            rows.push_back(std::move(row));
        }
        return rows;
    };
    int na = d.pa().ground_size(), nb = d.pb().ground_size(), nc = d.pc().ground_size();
    return {{"vertex_partitions",
             {{"A", partition_to_json(d.pa())},
              {"B", partition_to_json(d.pb())},
              {"C", partition_to_json(d.pc())}}},
            {"pair_classes",
             {{"ab", matrix(na, nb, [&](int a, int b) { return d.class_ab(a, b); })},
              {"ac", matrix(na, nc, [&](int a, int c) { return d.class_ac(a, c); })},
              {"bc", matrix(nb, nc, [&](int b, int c) { return d.class_bc(b, c); })}}}};
}

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

} // namespace

void write_runlog(std::ostream& out, const std::vector<RunlogRow>& rows) {
    out << "step,bound_name,paper_formula_value,achieved_value,pass\n";
    for (const RunlogRow& r : rows)
        out << csv_escape(r.step) << ',' << csv_escape(r.bound_name) << ','
            << csv_escape(r.paper_formula.empty() ? "n/a" : r.paper_formula) << ','
            << csv_escape(r.achieved) << ',' << (r.pass ? "true" : "false") << '\n';
}

} // namespace hompart
