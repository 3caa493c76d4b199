#include "sfj/graph_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace sfj {

namespace {

using nlohmann::json;

std::string line_context(std::string_view text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

const json& field(const json& obj, const char* key, const std::string& path) {
    if (!obj.is_object()) throw ValidationError(path + ": expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw ValidationError(path + ": missing field \"" + key + "\"");
    return *it;
}

int as_int(const json& value, const std::string& path) {
    if (!value.is_number_integer()) throw ValidationError(path + ": expected an integer");
    return value.get<int>();
}

double as_real(const json& value, const std::string& path) {
    if (!value.is_number()) throw ValidationError(path + ": expected a number");
    return value.get<double>();
}

}  // namespace

SignedDigraph parse_graph(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ValidationError("malformed JSON at " + line_context(text, e.byte == 0 ? 0 : e.byte - 1) +
                              ": " + e.what());
    }

    if (auto it = doc.find("schema"); doc.is_object() && it != doc.end()) {
        if (!it->is_number_integer() || it->get<int>() != 1)
            throw ValidationError("$.schema: unsupported schema version");
    }

    const int n = as_int(field(doc, "n", "$"), "$.n");
    if (n < 1) throw ValidationError("$.n: must be at least 1");

    const json& agents = field(doc, "agents", "$");
    if (!agents.is_array()) throw ValidationError("$.agents: expected an array");
    std::vector<double> beta(static_cast<std::size_t>(n), 0.0);
    std::vector<double> x0(static_cast<std::size_t>(n), 0.0);
    std::vector<bool> listed(static_cast<std::size_t>(n), false);
    for (std::size_t k = 0; k < agents.size(); ++k) {
        const std::string path = "$.agents[" + std::to_string(k) + "]";
        const json& agent = agents[k];
        const int id = as_int(field(agent, "id", path), path + ".id");
        if (id < 1 || id > n) throw ValidationError(path + ".id: outside 1.." + std::to_string(n));
        const auto slot = static_cast<std::size_t>(id - 1);
        if (listed[slot]) throw ValidationError(path + ".id: agent " + std::to_string(id) + " listed twice");
        listed[slot] = true;
        beta[slot] = as_real(field(agent, "beta", path), path + ".beta");
        x0[slot] = as_real(field(agent, "x0", path), path + ".x0");
    }
    for (std::size_t i = 0; i < listed.size(); ++i)
        if (!listed[i]) throw ValidationError("$.agents: agent " + std::to_string(i + 1) + " is missing");

    const json& edge_list = field(doc, "edges", "$");
    if (!edge_list.is_array()) throw ValidationError("$.edges: expected an array");
    std::vector<Edge> edges;
    edges.reserve(edge_list.size());
    for (std::size_t k = 0; k < edge_list.size(); ++k) {
        const std::string path = "$.edges[" + std::to_string(k) + "]";
        const json& e = edge_list[k];
        edges.push_back({as_int(field(e, "from", path), path + ".from"),
                         as_int(field(e, "to", path), path + ".to"),
                         as_real(field(e, "w", path), path + ".w")});
    }

    return SignedDigraph(static_cast<std::size_t>(n), std::move(edges), std::move(beta), std::move(x0));
}

SignedDigraph load_graph(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_graph(buffer.str());
}

std::string dump_graph(const SignedDigraph& g) {
    json agents = json::array();
    for (std::size_t i = 0; i < g.size(); ++i)
        agents.push_back({{"id", static_cast<int>(i + 1)}, {"beta", g.beta()[i]}, {"x0", g.x0()[i]}});
    json edges = json::array();
    for (const Edge& e : g.edges()) edges.push_back({{"from", e.from}, {"to", e.to}, {"w", e.weight}});
    json doc = {{"schema", 1}, {"n", g.size()}, {"agents", agents}, {"edges", edges}};
    return doc.dump(2) + "\n";
}

void save_graph(const SignedDigraph& g, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << dump_graph(g);
}

}  // namespace sfj
