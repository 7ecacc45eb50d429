#pragma once

#include "hompart/core.hpp"
#include "hompart/ecg.hpp"
#include "hompart/partition.hpp"
#include "hompart/triads.hpp"
#include "hompart/vc.hpp"

#include <json.hpp>

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace hompart {

/**
 * Parse failure carrying the 1-based source line. Line 0 marks whole-file
 * problems: unreadable path, missing header, incomplete edge coloring.
 */
class IoError : public std::runtime_error {
public:
    IoError(int line, const std::string& msg);
    int line() const { return line_; }

private:
    int line_;
};

/*
 * Text formats, one record per line, blank lines and text after '#' ignored:
 *   3graph tripartite nU nV nW   then "x y z" with part-local ids
 *   3graph general n             then "a b c", three distinct vertices
 *   graph bipartite nA nB        then "a b"
 *   ecg nA nB r                  then "a b color" with colors E_0..E_r
 */

struct ThreeGraphFile {
    bool is_tripartite = true;
    TripartiteThreeGraph tripartite;
    GeneralThreeGraph general;
};

ThreeGraphFile read_three_graph(std::istream& in);
ThreeGraphFile load_three_graph(const std::string& path);
void write_three_graph(std::ostream& out, const TripartiteThreeGraph& h);
void write_three_graph(std::ostream& out, const GeneralThreeGraph& h);

BipartiteGraph read_bipartite_graph(std::istream& in);
BipartiteGraph load_bipartite_graph(const std::string& path);
void write_bipartite_graph(std::ostream& out, const BipartiteGraph& g);

// The header names the largest color index r. A pair listed twice is
// rejected. Pairs never listed are rejected too unless default_to_zero is
// set, which places them in E_0.
EdgeColoredBipartiteGraph read_ecg(std::istream& in, bool default_to_zero);
EdgeColoredBipartiteGraph load_ecg(const std::string& path, bool default_to_zero);
void write_ecg(std::ostream& out, const EdgeColoredBipartiteGraph& g);

// Rationals serialize as {"num", "den"}, as plain integers while they fit
// 64 bits and as decimal strings beyond.
nlohmann::json to_json(const Ratio& r);
nlohmann::json to_json(const Density& d);

// {"ground": name, "blocks": [[ids]...]}
nlohmann::json partition_to_json(const Partition& p);
Partition partition_from_json(const nlohmann::json& j);
Partition load_partition(const std::string& path);
void save_json(const std::string& path, const nlohmann::json& j);

nlohmann::json to_json(const VcResult& r);
nlohmann::json to_json(const SvcResult& r);
nlohmann::json to_json(const HomogeneityAudit& a);
nlohmann::json to_json(const GoodSetAudit& a);
nlohmann::json to_json(const GoodnessAudit& a);

// Two levels: the three vertex partitions, then the pair-class matrices in
// row-major order.
nlohmann::json decomposition_to_json(const TripartiteDecomposition& d);

struct RunlogRow {
    std::string step;
    std::string bound_name;
    std::string paper_formula; // empty prints as n/a
    std::string achieved;
    bool pass = true;
};

void write_runlog(std::ostream& out, const std::vector<RunlogRow>& rows);

} // namespace hompart
