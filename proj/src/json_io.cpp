#include "qnsem/json_io.hpp"

#include <fstream>
#include <sstream>

namespace qnsem {
namespace {

const Json& field(const Json& j, const char* key, const char* what) {
    if (!j.is_object() || !j.contains(key)) throw Error(std::string(what) + " is missing \"" + key + "\"");
    return j.at(key);
}

Complex complex_from_json(const Json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
        return {j[0].get<double>(), j[1].get<double>()};
    }
    throw Error("complex entry must be a number or [re, im], got " + j.dump());
}

std::vector<std::string> string_list(const Json& j, const char* what) {
    if (!j.is_array()) throw Error(std::string(what) + " must be an array of strings");
    std::vector<std::string> out;
    for (const auto& x : j) {
        if (!x.is_string()) throw Error(std::string(what) + " must be an array of strings");
        out.push_back(x.get<std::string>());
    }
    return out;
}

std::vector<std::string> split_key(const std::string& key) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : key) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != ' ') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

void check_kind(const Json& j, const char* expected) {
    if (j.contains("kind") && j.at("kind") != expected) {
        throw Error("expected kind \"" + std::string(expected) + "\", got " + j.at("kind").dump());
    }
}

}  // namespace

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error("'" + path + "' is not valid JSON: " + e.what());
    }
}

ComplexMatrix matrix_from_json(const Json& j) {
    const auto rows = field(j, "rows", "matrix").get<long long>();
    const auto cols = field(j, "cols", "matrix").get<long long>();
    if (rows <= 0 || cols <= 0) throw Error("matrix dimensions must be positive");
    const Json& e = field(j, "entries", "matrix");
    if (!e.is_array()) throw Error("matrix entries must be an array");
    std::vector<Complex> entries;
    for (const auto& x : e) entries.push_back(complex_from_json(x));
    return ComplexMatrix(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols), std::move(entries));
}

Json to_json(const ComplexMatrix& m) {
    Json entries = Json::array();
    for (const auto& z : m.entries()) entries.push_back({z.real(), z.imag()});
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

Projector projector_from_json(const Json& j, double tol) {
    check_kind(j, "projector");
    return Projector::from_matrix(matrix_from_json(j), tol);
}

DensityOperator density_from_json(const Json& j, double tol) {
    check_kind(j, "density");
    return DensityOperator::from_matrix(matrix_from_json(j), tol);
}

Json to_json(const Projector& p) {
    Json j = to_json(p.matrix());
    j["kind"] = "projector";
    return j;
}

Json to_json(const DensityOperator& rho) {
    Json j = to_json(rho.matrix());
    j["kind"] = "density";
    return j;
}

Bindings bindings_from_json(const Json& j, double tol) {
    if (!j.is_object()) throw Error("bindings must be an object mapping atom names to projectors");
    Bindings b;
    for (const auto& [name, p] : j.items()) {
        if (!is_identifier(name)) throw Error("binding key '" + name + "' is not a valid atom name");
        try {
            b.emplace(name, projector_from_json(p, tol));
        } catch (const Error& e) {
            throw Error("binding '" + name + "': " + e.what());
        }
    }
    return b;
}

FiniteNMatrix finite_nmatrix_from_json(const Json& j) {
    auto values = string_list(field(j, "values", "N-matrix"), "values");
    auto designated = string_list(field(j, "designated", "N-matrix"), "designated");
    const Json& tables = field(j, "tables", "N-matrix");
    if (!tables.is_object()) throw Error("tables must be an object");
    std::map<TableOp, LabelTable> out;
    for (const auto& [name, table] : tables.items()) {
        const auto op = op_from_name(name);
        if (!op) throw Error("unknown connective table '" + name + "'");
        if (!table.is_object()) throw Error("table '" + name + "' must be an object");
        LabelTable t;
        for (const auto& [key, cell] : table.items()) {
            auto labels = string_list(cell, "table cell");
            t[split_key(key)] = {labels.begin(), labels.end()};
        }
        out[*op] = std::move(t);
    }
    return FiniteNMatrix(std::move(values), {designated.begin(), designated.end()}, std::move(out));
}

Json to_json(const FiniteNMatrix& m) {
    Json tables = Json::object();
    for (auto op : m.ops()) {
        Json t = Json::object();
        for (const auto& [inputs, outputs] : m.table(op)) {
            std::string key;
            for (const auto& x : inputs) key += (key.empty() ? "" : ",") + x;
            // cells listed in value order
            Json cell = Json::array();
            for (const auto& v : m.values())
                if (outputs.count(v)) cell.push_back(v);
            t[key] = cell;
        }
        tables[op_name(op)] = t;
    }
    Json designated = Json::array();
    for (const auto& v : m.values())
        if (m.is_designated(m.index_of(v))) designated.push_back(v);
    return {{"values", m.values()}, {"designated", designated}, {"tables", tables}};
}

FiniteOML lattice_from_json(const Json& j) {
    if (j.is_object() && j.contains("blocks")) {
        auto atoms = string_list(field(j, "atoms", "Greechie diagram"), "atoms");
        std::vector<std::vector<std::string>> blocks;
        for (const auto& b : j.at("blocks")) blocks.push_back(string_list(b, "block"));
        return from_greechie(atoms, blocks);
    }
    auto elements = string_list(field(j, "elements", "lattice"), "elements");
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < elements.size(); ++i) index.emplace(elements[i], i);
    auto resolve = [&](const Json& x) -> std::size_t {
        if (x.is_number_integer()) {
            const auto i = x.get<long long>();
            if (i < 0 || static_cast<std::size_t>(i) >= elements.size()) throw Error("element index out of range");
            return static_cast<std::size_t>(i);
        }
        if (x.is_string()) {
            auto it = index.find(x.get<std::string>());
            if (it == index.end()) throw Error("unknown element '" + x.get<std::string>() + "'");
            return it->second;
        }
        throw Error("element reference must be an index or a name");
    };
    std::vector<std::pair<std::size_t, std::size_t>> leq;
    for (const auto& p : field(j, "leq", "lattice")) {
        if (!p.is_array() || p.size() != 2) throw Error("leq entries must be pairs");
        leq.emplace_back(resolve(p[0]), resolve(p[1]));
    }
    const Json& o = field(j, "ortho", "lattice");
    std::vector<std::size_t> perp(elements.size(), FiniteOML::npos);
    for (const auto& [a, b] : o.items()) {
        const auto x = resolve(Json(a));
        const auto y = resolve(b);
        perp[x] = y;
        if (perp[y] == FiniteOML::npos) perp[y] = x;
    }
    for (std::size_t i = 0; i < perp.size(); ++i)
        if (perp[i] == FiniteOML::npos) throw Error("orthocomplement of '" + elements[i] + "' is not given");
    return FiniteOML(elements, leq, perp, resolve(field(j, "bottom", "lattice")), resolve(field(j, "top", "lattice")));
}

Json to_json(const FiniteOML& l) {
    Json leq = Json::array();
    Json ortho = Json::object();
    for (std::size_t i = 0; i < l.size(); ++i) {
        ortho[l.name(i)] = l.name(l.ortho(i));
        for (std::size_t k = 0; k < l.size(); ++k)
            if (l.leq(i, k)) leq.push_back({i, k});
    }
    return {{"elements", l.names()}, {"leq", leq}, {"ortho", ortho},
            {"bottom", l.name(l.bottom())}, {"top", l.name(l.top())}};
}

VectorContextFamily family_from_json(const Json& j) {
    const auto dim = field(j, "dim", "family").get<long long>();
    if (dim <= 0) throw Error("family dimension must be positive");
    std::map<std::string, CVector> vectors;
    for (const auto& [id, comps] : field(j, "vectors", "family").items()) {
        if (!comps.is_array()) throw Error("vector '" + id + "' must be an array");
        CVector v;
        for (const auto& c : comps) v.push_back(complex_from_json(c));
        vectors.emplace(id, std::move(v));
    }
    std::vector<std::vector<std::string>> contexts;
    for (const auto& c : field(j, "contexts", "family")) contexts.push_back(string_list(c, "context"));
    return VectorContextFamily(static_cast<std::size_t>(dim), std::move(vectors), std::move(contexts));
}

ThresholdMap threshold_map_from_json(const Json& j) {
    std::vector<std::pair<Region, std::string>> pieces;
    for (const auto& p : field(j, "pieces", "threshold map")) {
        Region r{field(p, "lo", "piece").get<double>(), field(p, "hi", "piece").get<double>(),
                 p.value("lo_open", false), p.value("hi_open", false)};
        pieces.emplace_back(r, field(p, "label", "piece").get<std::string>());
    }
    return ThresholdMap(std::move(pieces));
}

std::vector<Formula> load_formulas(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    std::vector<Formula> out;
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '[') {
        Json j;
        try {
            j = Json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            throw Error("'" + path + "' is not valid JSON: " + e.what());
        }
        for (const auto& s : string_list(j, "formula list")) out.push_back(parse(s));
        return out;
    }
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos || line[b] == '#') continue;
        out.push_back(parse(line));
    }
    return out;
}

}  // namespace qnsem
