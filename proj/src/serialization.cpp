#include "glvkit/serialization.hpp"

#include <fstream>

namespace glv {

Json rational_to_json(const Rational& r) {
    if (is_integer(r)) {
        const BigInt n = num(r);
        // JSON numbers only carry integers faithfully up to 2^53
        if (n >= -(BigInt(1) << 53) && n <= (BigInt(1) << 53))
            return Json(n.convert_to<std::int64_t>());
    }
    return Json(to_string(r));
}

Rational rational_from_json(const Json& j, const std::string& where) {
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    if (j.is_number_unsigned()) return Rational(j.get<std::uint64_t>());
    if (j.is_string()) {
        try {
            return parse_rational(j.get<std::string>());
        } catch (const ParseError& e) {
            throw ParseError(where + ": " + e.what());
        }
    }
    if (j.is_number_float())
        throw ParseError(where + ": floats are not exact; write the value as \"p/q\"");
    throw ParseError(where + ": expected an integer or a \"p/q\" string");
}

Json matrix_to_json(const RatMatrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(rational_to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

RatMatrix matrix_from_json(const Json& j, const std::string& where) {
    if (!j.is_array() || j.empty())
        throw ParseError(where + ": expected a nonempty array of rows");
    const std::size_t rows = j.size();
    if (!j[0].is_array() || j[0].empty())
        throw ParseError(where + ": rows must be nonempty arrays");
    const std::size_t cols = j[0].size();
    RatMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols)
            throw ParseError(where + ": row " + std::to_string(i + 1) + " has " +
                             std::to_string(j[i].size()) + " entries, expected " +
                             std::to_string(cols));
        for (std::size_t c = 0; c < cols; ++c)
            m(i, c) = rational_from_json(j[i][c], where + "[" + std::to_string(i + 1) + "][" +
                                                      std::to_string(c + 1) + "]");
    }
    return m;
}

namespace {

std::vector<Rational> vector_from_json(const Json& j, const std::string& where) {
    if (!j.is_array()) throw ParseError(where + ": expected an array");
    std::vector<Rational> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(rational_from_json(j[i], where + "[" + std::to_string(i + 1) + "]"));
    return out;
}

Json vector_to_json(const std::vector<Rational>& v) {
    Json out = Json::array();
    for (const auto& r : v) out.push_back(rational_to_json(r));
    return out;
}

} // namespace

SystemFile system_from_json(const Json& j) {
    if (!j.is_object()) throw ParseError("top level: expected an object");
    for (const char* key : {"n", "m", "lambda", "A", "B"})
        if (!j.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");

    const auto n = j.at("n").get<std::int64_t>();
    const auto m = j.at("m").get<std::int64_t>();
    if (n < 1 || m < 1) throw ParseError("n and m must be positive");

    RatMatrix A = matrix_from_json(j.at("A"), "A");
    RatMatrix B = matrix_from_json(j.at("B"), "B");
    const auto lam = vector_from_json(j.at("lambda"), "lambda");
    if (A.rows() != static_cast<std::size_t>(n) || A.cols() != static_cast<std::size_t>(m))
        throw ParseError("A must be n x m");
    if (B.rows() != static_cast<std::size_t>(m) || B.cols() != static_cast<std::size_t>(n))
        throw ParseError("B must be m x n");
    if (lam.size() != static_cast<std::size_t>(n)) throw ParseError("lambda must have n entries");

    std::string name = j.value("name", std::string());
    GLVSystem sys = [&] {
        try {
            return GLVSystem(std::move(B), std::move(A), RatMatrix::column(lam), std::move(name));
        } catch (const InvalidSystem& e) {
            throw ParseError(e.what());
        }
    }();

    std::optional<GLVPFactorization> fact;
    if (j.contains("factorization")) {
        const Json& jf = j.at("factorization");
        for (const char* key : {"K", "D_diag", "L"})
            if (!jf.contains(key))
                throw ParseError(std::string("factorization: missing field \"") + key + "\"");
        GLVPFactorization f;
        f.K = matrix_from_json(jf.at("K"), "factorization.K");
        f.Ddiag = vector_from_json(jf.at("D_diag"), "factorization.D_diag");
        f.L = RatMatrix::column(vector_from_json(jf.at("L"), "factorization.L"));
        if (f.K.rows() != sys.n() || f.K.cols() != sys.n())
            throw ParseError("factorization.K must be n x n");
        if (f.Ddiag.size() != sys.m()) throw ParseError("factorization.D_diag must have m entries");
        if (f.L.rows() != sys.n()) throw ParseError("factorization.L must have n entries");
        fact = std::move(f);
    }
    return SystemFile{std::move(sys), std::move(fact)};
}

SystemFile load_system_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
    return system_from_json(j);
}

Json system_to_json(const SystemFile& sf) {
    const GLVSystem& sys = sf.system;
    Json j;
    j["name"] = sys.name();
    j["n"] = sys.n();
    j["m"] = sys.m();
    j["lambda"] = vector_to_json(sys.lambda().col(0));
    j["A"] = matrix_to_json(sys.A());
    j["B"] = matrix_to_json(sys.B());
    if (sf.factorization) {
        Json jf;
        jf["K"] = matrix_to_json(sf.factorization->K);
        jf["D_diag"] = vector_to_json(sf.factorization->Ddiag);
        jf["L"] = vector_to_json(sf.factorization->L.col(0));
        j["factorization"] = std::move(jf);
    }
    return j;
}

Json hamiltonian_to_json(const HamiltonianExpr& h) {
    Json j;
    j["chart"] = h.chart == Chart::PositiveOrthant ? "positive-orthant" : "log";
    Json terms = Json::array();
    for (const auto& t : h.terms) {
        Json jt;
        jt["coefficient"] = rational_to_json(t.coefficient);
        jt["exponents"] = vector_to_json(t.exponents);
        terms.push_back(std::move(jt));
    }
    j["terms"] = std::move(terms);
    j[h.chart == Chart::PositiveOrthant ? "log_terms" : "linear_terms"] = vector_to_json(h.linear);
    return j;
}

Json conservation_report_to_json(const ConservationReport& report) {
    Json out = Json::array();
    for (const auto& e : report.entries) {
        Json je;
        je["label"] = e.label;
        je["initial"] = e.initial;
        je["max_abs_drift"] = e.max_abs_drift;
        je["max_rel_drift"] = e.max_rel_drift;
        out.push_back(std::move(je));
    }
    return out;
}

Json chain_to_json(const TransformChain& chain) {
    Json out = Json::array();
    for (const auto& step : chain.steps()) {
        Json js;
        if (const auto* q = std::get_if<QmtStep>(&step)) {
            js["type"] = "qmt";
            js["C"] = matrix_to_json(q->C);
        } else if (const auto* d = std::get_if<DecoupleStep>(&step)) {
            js["type"] = "decouple";
            js["p"] = d->p;
            js["alpha"] = vector_to_json(d->alpha);
        } else if (std::get_if<LogStep>(&step)) {
            js["type"] = "log";
        } else if (const auto* l = std::get_if<LinearStep>(&step)) {
            js["type"] = "linear";
            js["P"] = matrix_to_json(l->P);
        }
        out.push_back(std::move(js));
    }
    return out;
}

Json darboux_report_to_json(const DarbouxSystem& d, const std::string& method) {
    Json j;
    j["method"] = method;
    j["n"] = d.n;
    j["r"] = d.r;
    j["J"] = matrix_to_json(d.J);
    j["hamiltonian"] = hamiltonian_to_json(d.H);
    j["chain"] = chain_to_json(d.chain);
    return j;
}

} // namespace glv
