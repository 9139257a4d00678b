#include "support.hpp"

#include "ergolab/io.hpp"

using namespace ergolab;
using namespace ergolab::cli;
using namespace ergolab::testing;

namespace {

std::string error_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const InputError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST(StateFiles, ParsesFlatRealAndComplexEntries) {
    const StateFile sf = parse_state(R"({"dims": [2, 1], "n_systems": 1, "label": "plus",
        "matrix": [0.5, [0.5, 0], [0.5, 0.0], 0.5]})");
    EXPECT_EQ(sf.dims, (std::vector<Index>{2, 1}));
    EXPECT_EQ(sf.label, "plus");
    EXPECT_TRUE(MatrixNear(sf.matrix, (ComplexMatrix::Identity(2, 2) + pauli_x()) / 2.0, 0.0));
}

TEST(StateFiles, ParsesNestedRows) {
    const StateFile sf = parse_state(R"({"dims": [2], "n_systems": 1,
        "matrix": [[[0.5, 0], [0, -0.5]], [[0, 0.5], [0.5, 0]]]})");
    EXPECT_EQ(sf.matrix(0, 1), Complex(0.0, -0.5));
    EXPECT_EQ(sf.matrix(1, 0), Complex(0.0, 0.5));
}

TEST(StateFiles, SyntaxErrorReportsByteOffset) {
    const std::string msg = error_of([] { parse_state(R"({"dims": [2,, 1]})", "bad.json"); });
    EXPECT_NE(msg.find("bad.json: byte 13"), std::string::npos) << msg;
}

TEST(StateFiles, SemanticErrorsReportJsonPointers) {
    EXPECT_NE(error_of([] { parse_state(R"({"n_systems": 1, "matrix": [1]})", "s"); }).find("s:/: missing \"dims\""), std::string::npos);
    EXPECT_NE(error_of([] { parse_state(R"({"dims": [2, 0], "n_systems": 1, "matrix": [1]})", "s"); }).find("s:/dims/1"), std::string::npos);
    EXPECT_NE(error_of([] { parse_state(R"({"dims": [2], "n_systems": 2, "matrix": [1]})", "s"); }).find("s:/n_systems"), std::string::npos);
    EXPECT_NE(error_of([] { parse_state(R"({"dims": [2], "n_systems": 1, "matrix": [1, 0, "x", 0]})", "s"); }).find("s:/matrix/2"), std::string::npos);
    EXPECT_NE(error_of([] { parse_state(R"({"dims": [2], "n_systems": 1, "matrix": [1, 0, [0, 1, 2], 0]})", "s"); }).find("s:/matrix/2: expected [re, im]"), std::string::npos);
    EXPECT_NE(error_of([] { parse_state(R"({"dims": [2], "n_systems": 1, "matrix": [1, 0, 0]})", "s"); }).find("not a square count"), std::string::npos);
    EXPECT_NE(error_of([] { parse_state(R"({"dims": [3], "n_systems": 1, "matrix": [1, 0, 0, 0]})", "s"); }).find("dims multiply to 3"), std::string::npos);
    EXPECT_NE(error_of([] { parse_state(R"({"dims": [2], "n_systems": 1, "matrix": [1, 0, 0, 1]})", "s"); }).find("not a density operator"), std::string::npos);
}

TEST(StateFiles, RoundTrip) {
    for (std::uint64_t s = 0; s < 10; ++s) {
        StateFile sf;
        sf.dims = {2, 3};
        sf.matrix = random_density(6, 1 + static_cast<Index>(s % 6), s).matrix();
        sf.label = "random";
        const StateFile back = parse_state(dump(state_to_json(sf)));
        EXPECT_EQ(back.dims, sf.dims);
        EXPECT_EQ(back.label, sf.label);
        EXPECT_TRUE(MatrixNear(back.matrix, sf.matrix, 1e-12));
    }
}

TEST(StateFiles, BipartiteAndMultipartiteViews) {
    StateFile sf;
    sf.dims = {2, 2, 2};
    sf.n_systems = 2;
    sf.matrix = ghz_state(2, 1).matrix();
    EXPECT_EQ(to_multipartite(sf).n_ancillas(), 1u);
    EXPECT_THROW(to_bipartite(sf), InputError);
    sf.n_systems = 1;
    sf.dims = {4, 2};
    EXPECT_EQ(to_bipartite(sf).dim_system(), 4);
}

TEST(HamiltonianFiles, EigenvaluesOrMatrix) {
    const HamiltonianFile a = parse_hamiltonian(R"({"eigenvalues": [0, 1, 2], "units": "meV"})");
    EXPECT_TRUE(MatrixNear(a.h.matrix(), diag({0.0, 1.0, 2.0}), 0.0));
    EXPECT_EQ(a.units, "meV");
    const HamiltonianFile b = parse_hamiltonian(R"({"matrix": [0, 1, 1, 0], "eigenvalues": [-1, 1]})");
    EXPECT_TRUE(MatrixNear(b.h.matrix(), pauli_x(), 0.0));
}

TEST(HamiltonianFiles, Errors) {
    EXPECT_NE(error_of([] { parse_hamiltonian(R"({"matrix": [0, 1, 1, 0], "eigenvalues": [0, 1]})", "h"); }).find("does not match"), std::string::npos);
    EXPECT_NE(error_of([] { parse_hamiltonian(R"({"eigenvalues": [1, 0]})", "h"); }).find("ascending"), std::string::npos);
    EXPECT_NE(error_of([] { parse_hamiltonian(R"({"matrix": [0, 1, 2, 0]})", "h"); }).find("h:/matrix"), std::string::npos);
    EXPECT_NE(error_of([] { parse_hamiltonian(R"({"units": "eV"})", "h"); }).find("needs \"eigenvalues\" or \"matrix\""), std::string::npos);
}

TEST(HamiltonianFiles, LocalsAndRoundTrip) {
    const LocalHamiltonians hs = parse_local_hamiltonians(R"({"locals": [{"eigenvalues": [0, 1]}, {"eigenvalues": [0, 2, 3]}]})");
    ASSERT_EQ(hs.terms.size(), 2u);
    EXPECT_EQ(hs.terms[1].dim(), 3);
    EXPECT_NE(error_of([] { parse_local_hamiltonians(R"({"locals": [{"eigenvalues": [0, 1]}, {"eigenvalues": [1, 0]}]})", "h"); })
                  .find("h:/locals/1/eigenvalues"),
              std::string::npos);
    const HermitianOperator h = random_hermitian(3, 4);
    const HamiltonianFile back = parse_hamiltonian(dump(hamiltonian_to_json(h, "eV")));
    EXPECT_TRUE(MatrixNear(back.h.matrix(), h.matrix(), 1e-12));
    EXPECT_EQ(back.units, "eV");
}

TEST(PovmFiles, RoundTripAndValidation) {
    const Povm m = oracle::random_povm(2, 3, 5);
    const ProductPovm p = parse_product_povm(dump(povm_to_json(m)));
    ASSERT_EQ(p.locals.size(), 1u);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_TRUE(MatrixNear(p.locals[0][i].matrix(), m[i].matrix(), 1e-12));
    const ProductPovm two = parse_product_povm(dump(product_povm_to_json({{m, Povm::computational(3)}})));
    EXPECT_EQ(two.locals.size(), 2u);
    EXPECT_NE(error_of([] { parse_product_povm(R"({"effects": [[1, 0, 0, 0]]})", "p"); }).find("p:/effects"), std::string::npos);
    EXPECT_NE(error_of([] { parse_product_povm(R"({"locals": [{"effects": [[1, 0, 0, 1]]}, {}]})", "p"); }).find("p:/locals/1"), std::string::npos);
}

TEST(Formatting, SeventeenDigitsAndRoundTrip) {
    EXPECT_EQ(format_number(0.1), "0.10000000000000001");
    EXPECT_EQ(format_number(1.0), "1");
    EXPECT_EQ(format_number(-2.5), "-2.5");
    for (double v : {1.0 / 3.0, std::sqrt(2.0), 1e-300, -123456.789})
        EXPECT_EQ(std::stod(format_number(v)), v);
    EXPECT_EQ(dump(Json{{"x", 1.0 / 3.0}}), "{\n  \"x\": 0.3333333333333333\n}\n");
}

TEST(Files, MissingFileIsInputError) {
    EXPECT_THROW(read_text("/nonexistent/state.json"), InputError);
}
