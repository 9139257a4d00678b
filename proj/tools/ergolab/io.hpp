// io.hpp
// JSON file formats for states, Hamiltonians and POVMs. Complex numbers are
// [re, im] pairs; matrices are row-major, either flat (n*n pairs) or nested
// (n rows of n pairs).

#pragma once

#include "ergolab/ergolab.hpp"

#include <json.hpp>

#include <fstream>
#include <locale>
#include <sstream>

namespace ergolab::cli {

using Json = nlohmann::json;

/// Malformed or inconsistent input; `where` is a byte offset or JSON pointer.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

struct StateFile {
    std::vector<Index> dims;  // systems first, then ancillas
    std::size_t n_systems = 1;
    ComplexMatrix matrix;
    std::string label;

    std::vector<Index> system_dims() const { return {dims.begin(), dims.begin() + static_cast<std::ptrdiff_t>(n_systems)}; }
    std::vector<Index> ancilla_dims() const { return {dims.begin() + static_cast<std::ptrdiff_t>(n_systems), dims.end()}; }
};

struct HamiltonianFile {
    HermitianOperator h;
    std::string units;
};

namespace detail {

inline std::string at(const std::string& source, const Json::json_pointer& ptr) {
    return source + ":" + (ptr.empty() ? std::string("/") : ptr.to_string());
}

inline Json parse_text(const std::string& text, const std::string& source) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw InputError(source + ": byte " + std::to_string(e.byte) + ": " + e.what());
    }
}

inline double number(const Json& j, const std::string& source, const Json::json_pointer& ptr) {
    if (!j.is_number()) throw InputError(at(source, ptr) + ": expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw InputError(at(source, ptr) + ": non-finite value");
    return v;
}

inline Complex complex_entry(const Json& j, const std::string& source, const Json::json_pointer& ptr) {
    if (j.is_number()) return {number(j, source, ptr), 0.0};
    if (!j.is_array() || j.size() != 2) throw InputError(at(source, ptr) + ": expected [re, im]");
    return {number(j[0], source, ptr / 0), number(j[1], source, ptr / 1)};
}

inline ComplexMatrix matrix(const Json& j, const std::string& source, const Json::json_pointer& ptr) {
    if (!j.is_array() || j.empty()) throw InputError(at(source, ptr) + ": expected a non-empty array");
    const bool nested = j[0].is_array() && !j[0].empty() && j[0][0].is_array();
    if (nested) {
        const auto n = static_cast<Index>(j.size());
        ComplexMatrix m(n, n);
        for (Index r = 0; r < n; ++r) {
            const auto& row = j[static_cast<std::size_t>(r)];
            const auto rp = ptr / static_cast<std::size_t>(r);
            if (!row.is_array() || static_cast<Index>(row.size()) != n)
                throw InputError(at(source, rp) + ": expected a row of " + std::to_string(n) + " entries");
            for (Index c = 0; c < n; ++c) m(r, c) = complex_entry(row[static_cast<std::size_t>(c)], source, rp / static_cast<std::size_t>(c));
        }
        return m;
    }
    const auto count = static_cast<Index>(j.size());
    const auto n = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(count))));
    if (n * n != count) throw InputError(at(source, ptr) + ": " + std::to_string(count) + " entries is not a square count");
    ComplexMatrix m(n, n);
    for (Index k = 0; k < count; ++k) m(k / n, k % n) = complex_entry(j[static_cast<std::size_t>(k)], source, ptr / static_cast<std::size_t>(k));
    return m;
}

inline const Json& member(const Json& j, const char* key, const std::string& source, const Json::json_pointer& ptr) {
    if (!j.is_object()) throw InputError(at(source, ptr) + ": expected an object");
    const auto it = j.find(key);
    if (it == j.end()) throw InputError(at(source, ptr) + ": missing \"" + key + "\"");
    return *it;
}

inline HermitianOperator hermitian(const ComplexMatrix& m, const std::string& where) {
    try {
        return HermitianOperator(m);
    } catch (const std::exception& e) {
        throw InputError(where + ": " + e.what());
    }
}

}  // namespace detail

inline std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(path + ": cannot open");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError(path + ": cannot write");
    out << text;
    if (!out) throw InputError(path + ": write failed");
}

inline Json matrix_to_json(const ComplexMatrix& m) {
    Json rows = Json::array();
    for (Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Json real_vector_to_json(const RealVector& v) {
    Json out = Json::array();
    for (Index k = 0; k < v.size(); ++k) out.push_back(v(k));
    return out;
}

// ---------------------------------------------------------------------------
// States

inline StateFile parse_state(const std::string& text, const std::string& source = "state") {
    const Json j = detail::parse_text(text, source);
    const Json::json_pointer root;
    StateFile sf;
    const Json& dims = detail::member(j, "dims", source, root);
    if (!dims.is_array() || dims.empty()) throw InputError(detail::at(source, root / "dims") + ": expected a non-empty array");
    for (std::size_t k = 0; k < dims.size(); ++k) {
        if (!dims[k].is_number_integer() || dims[k].get<long long>() < 1)
            throw InputError(detail::at(source, root / "dims" / k) + ": expected a positive integer");
        sf.dims.push_back(dims[k].get<Index>());
    }
    const Json& ns = detail::member(j, "n_systems", source, root);
    if (!ns.is_number_integer() || ns.get<long long>() < 1 || ns.get<std::size_t>() > sf.dims.size())
        throw InputError(detail::at(source, root / "n_systems") + ": expected an integer in [1, " + std::to_string(sf.dims.size()) + "]");
    sf.n_systems = ns.get<std::size_t>();
    sf.matrix = detail::matrix(detail::member(j, "matrix", source, root), source, root / "matrix");
    const Index total = ergolab::detail::product(sf.dims);
    if (sf.matrix.rows() != total)
        throw InputError(detail::at(source, root / "matrix") + ": matrix is " + std::to_string(sf.matrix.rows()) +
                         "x" + std::to_string(sf.matrix.rows()) + " but dims multiply to " + std::to_string(total));
    if (const auto it = j.find("label"); it != j.end()) {
        if (!it->is_string()) throw InputError(detail::at(source, root / "label") + ": expected a string");
        sf.label = it->get<std::string>();
    }
    try {
        (void)DensityOperator(sf.matrix);
    } catch (const std::exception& e) {
        throw InputError(detail::at(source, root / "matrix") + ": not a density operator: " + e.what());
    }
    return sf;
}

inline Json state_to_json(const StateFile& sf) {
    Json j;
    j["dims"] = sf.dims;
    j["n_systems"] = sf.n_systems;
    if (!sf.label.empty()) j["label"] = sf.label;
    j["matrix"] = matrix_to_json(sf.matrix);
    return j;
}

inline MultipartiteState to_multipartite(const StateFile& sf) {
    try {
        return MultipartiteState(DensityOperator(sf.matrix), sf.system_dims(), sf.ancilla_dims());
    } catch (const std::exception& e) {
        throw InputError(e.what());
    }
}

/// One system and one ancilla.
inline BipartiteState to_bipartite(const StateFile& sf) {
    if (sf.n_systems != 1 || sf.dims.size() != 2)
        throw InputError("expected a bipartite state (one system, one ancilla), got " + std::to_string(sf.n_systems) +
                         " system(s) and " + std::to_string(sf.dims.size() - sf.n_systems) + " ancilla(s)");
    return BipartiteState(DensityOperator(sf.matrix), sf.dims[0], sf.dims[1]);
}

// ---------------------------------------------------------------------------
// Hamiltonians

inline HamiltonianFile hamiltonian_from_json(const Json& j, const std::string& source, const Json::json_pointer& ptr) {
    if (!j.is_object()) throw InputError(detail::at(source, ptr) + ": expected an object");
    HamiltonianFile out;
    std::optional<RealVector> eigenvalues;
    if (const auto it = j.find("eigenvalues"); it != j.end()) {
        if (!it->is_array() || it->empty()) throw InputError(detail::at(source, ptr / "eigenvalues") + ": expected a non-empty array");
        RealVector ev(static_cast<Index>(it->size()));
        for (std::size_t k = 0; k < it->size(); ++k) ev(static_cast<Index>(k)) = detail::number((*it)[k], source, ptr / "eigenvalues" / k);
        for (Index k = 1; k < ev.size(); ++k)
            if (ev(k) < ev(k - 1)) throw InputError(detail::at(source, ptr / "eigenvalues") + ": eigenvalues must be ascending");
        eigenvalues = ev;
    }
    if (const auto it = j.find("matrix"); it != j.end()) {
        out.h = detail::hermitian(detail::matrix(*it, source, ptr / "matrix"), detail::at(source, ptr / "matrix"));
        if (eigenvalues) {
            const RealVector spec = ergolab::detail::eigenvalues_ascending(out.h.matrix());
            if (spec.size() != eigenvalues->size() || (spec - *eigenvalues).cwiseAbs().maxCoeff() > 1e-8)
                throw InputError(detail::at(source, ptr) + ": matrix spectrum does not match \"eigenvalues\"");
        }
    } else if (eigenvalues) {
        out.h = HermitianOperator(ComplexMatrix(eigenvalues->cast<Complex>().asDiagonal()));
    } else {
        throw InputError(detail::at(source, ptr) + ": needs \"eigenvalues\" or \"matrix\"");
    }
    if (const auto it = j.find("units"); it != j.end()) {
        if (!it->is_string()) throw InputError(detail::at(source, ptr / "units") + ": expected a string");
        out.units = it->get<std::string>();
    }
    return out;
}

inline HamiltonianFile parse_hamiltonian(const std::string& text, const std::string& source = "hamiltonian") {
    return hamiltonian_from_json(detail::parse_text(text, source), source, Json::json_pointer());
}

/// {"locals": [hamiltonian, ...]} or a single Hamiltonian (one system).
inline LocalHamiltonians parse_local_hamiltonians(const std::string& text, const std::string& source = "hamiltonian") {
    const Json j = detail::parse_text(text, source);
    LocalHamiltonians out;
    if (j.is_object() && j.contains("locals")) {
        const Json& locals = j["locals"];
        if (!locals.is_array() || locals.empty()) throw InputError(detail::at(source, Json::json_pointer("/locals")) + ": expected a non-empty array");
        for (std::size_t k = 0; k < locals.size(); ++k)
            out.terms.push_back(hamiltonian_from_json(locals[k], source, Json::json_pointer("/locals") / k).h);
    } else {
        out.terms.push_back(hamiltonian_from_json(j, source, Json::json_pointer()).h);
    }
    return out;
}

inline Json hamiltonian_to_json(const HermitianOperator& h, const std::string& units = "") {
    Json j;
    j["eigenvalues"] = real_vector_to_json(ergolab::detail::eigenvalues_ascending(h.matrix()));
    j["matrix"] = matrix_to_json(h.matrix());
    if (!units.empty()) j["units"] = units;
    return j;
}

// ---------------------------------------------------------------------------
// POVMs

inline Povm povm_from_json(const Json& j, const std::string& source, const Json::json_pointer& ptr) {
    const Json& effects = detail::member(j, "effects", source, ptr);
    if (!effects.is_array() || effects.empty()) throw InputError(detail::at(source, ptr / "effects") + ": expected a non-empty array");
    std::vector<HermitianOperator> es;
    for (std::size_t k = 0; k < effects.size(); ++k)
        es.push_back(detail::hermitian(detail::matrix(effects[k], source, ptr / "effects" / k),
                                       detail::at(source, ptr / "effects" / k)));
    try {
        return Povm(std::move(es));
    } catch (const std::exception& e) {
        throw InputError(detail::at(source, ptr / "effects") + ": " + e.what());
    }
}

inline Json povm_to_json(const Povm& p) {
    Json effects = Json::array();
    for (const auto& e : p.effects()) effects.push_back(matrix_to_json(e.matrix()));
    return Json{{"effects", std::move(effects)}};
}

/// {"locals": [{"effects": ...}, ...]} or a single {"effects": ...}.
inline ProductPovm parse_product_povm(const std::string& text, const std::string& source = "povm") {
    const Json j = detail::parse_text(text, source);
    ProductPovm out;
    if (j.is_object() && j.contains("locals")) {
        const Json& locals = j["locals"];
        if (!locals.is_array() || locals.empty()) throw InputError(detail::at(source, Json::json_pointer("/locals")) + ": expected a non-empty array");
        for (std::size_t k = 0; k < locals.size(); ++k)
            out.locals.push_back(povm_from_json(locals[k], source, Json::json_pointer("/locals") / k));
    } else {
        out.locals.push_back(povm_from_json(j, source, Json::json_pointer()));
    }
    return out;
}

inline Json product_povm_to_json(const ProductPovm& p) {
    Json locals = Json::array();
    for (const auto& l : p.locals) locals.push_back(povm_to_json(l));
    return Json{{"locals", std::move(locals)}};
}

// ---------------------------------------------------------------------------
// Text output

/// 17 significant digits, classic locale.
inline std::string format_number(double v) {
    std::ostringstream ss;
    ss.imbue(std::locale::classic());
    ss.precision(17);
    ss << v;
    return ss.str();
}

/// JSON text with a trailing newline; numbers use shortest round-trip form.
inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace ergolab::cli
