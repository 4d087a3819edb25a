#include "robtherm/json_io.hpp"

#include <cmath>
#include <limits>

namespace robtherm {

Json number_to_json(double v) {
    if (std::isnan(v)) return nullptr;
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

double number_from_json(const Json& j, const std::string& path) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
    }
    if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
    throw InputError(path, "expected a number");
}

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j, const std::string& path) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw InputError(path, "expected a complex number [re, im]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

Json matrix_to_json(const ComplexMatrix& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(complex_to_json(m(i, k)));
        rows.push_back(std::move(row));
    }
    return rows;
}

ComplexMatrix matrix_from_json(const Json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) throw InputError(path, "expected a non-empty array of rows");
    const auto n = static_cast<Eigen::Index>(j.size());
    ComplexMatrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const std::string row_path = path + "[" + std::to_string(i) + "]";
        const Json& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
            throw InputError(row_path, "expected a row of length " + std::to_string(n));
        }
        for (Eigen::Index k = 0; k < n; ++k) {
            m(i, k) = complex_from_json(row[static_cast<std::size_t>(k)], row_path + "[" + std::to_string(k) + "]");
        }
    }
    return m;
}

Json vector_to_json(const ComplexVector& v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
    return out;
}

ComplexVector vector_from_json(const Json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) throw InputError(path, "expected a non-empty array");
    ComplexVector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i], path + "[" + std::to_string(i) + "]");
    }
    return v;
}

Json beta_to_json(Beta beta) { return beta.is_infinite() ? Json("inf") : Json(beta.value()); }

Beta beta_from_json(const Json& j, const std::string& path) {
    if (j.is_string() && j.get<std::string>() == "inf") return Beta::infinite();
    if (!j.is_number()) throw InputError(path, "expected a positive number or \"inf\"");
    const double v = j.get<double>();
    if (!(v > 0.0) || !std::isfinite(v)) throw InputError(path, "beta must be positive (beta = 0 is not supported)");
    return Beta::finite(v);
}

Json to_json(const RobustnessResult& r, bool with_certificates) {
    Json j;
    j["value"] = number_to_json(r.value);
    j["lower"] = number_to_json(r.lower);
    j["upper"] = number_to_json(r.upper);
    j["gap"] = number_to_json(r.gap);
    j["status"] = to_string(r.status);
    j["newton_iterations"] = r.newton_iterations;
    if (with_certificates) {
        j["witness"] = matrix_to_json(r.witness.matrix());
        Json q = Json::array();
        for (Eigen::Index k = 0; k < r.primal_weights.size(); ++k) q.push_back(number_to_json(r.primal_weights(k)));
        j["primal_weights"] = std::move(q);
    }
    return j;
}

Json to_json(const CertificateCheck& c) {
    return Json{{"witness_min_eigenvalue", number_to_json(c.witness_min_eigenvalue)},
                {"witness_max_constraint", number_to_json(c.witness_max_constraint)},
                {"weights_min", number_to_json(c.weights_min)},
                {"mixture_min_eigenvalue", number_to_json(c.mixture_min_eigenvalue)},
                {"witness_feasible", c.witness_feasible()},
                {"primal_feasible", c.primal_feasible()}};
}

Json to_json(const BoundReport& r) {
    return Json{{"check", r.check},
                {"direction", r.direction == BoundDirection::AtLeast ? ">=" : "<="},
                {"lhs", number_to_json(r.lhs)},
                {"rhs", number_to_json(r.rhs)},
                {"satisfied", r.satisfied},
                {"slack", number_to_json(r.slack)},
                {"precondition_met", r.precondition_met},
                {"robustness", number_to_json(r.robustness)},
                {"note", r.note}};
}

Json to_json(const ProtocolTrace& t) {
    return Json{{"dW_a", number_to_json(t.dW_a)},
                {"dW_b", number_to_json(t.dW_b)},
                {"dW_c", number_to_json(t.dW_c)},
                {"dW_d", number_to_json(t.dW_d)},
                {"total", number_to_json(t.total)},
                {"hamiltonian", matrix_to_json(t.hamiltonian.matrix())},
                {"final_state", matrix_to_json(t.final_state.matrix())}};
}

Json to_json(const Rank1Witness& w) {
    return Json{{"c", number_to_json(w.c)}, {"y", vector_to_json(w.y.amplitudes())}, {"achieved", number_to_json(w.achieved)}};
}

Json free_set_to_json(const FreeSetSpec& spec) {
    Json j;
    j["free_set"] = spec.describe();
    j["dim"] = spec.dim();
    j["count"] = spec.size();
    Json points = Json::array();
    if (spec.all_pure()) {
        for (const auto& p : spec.pure_extreme_points()) points.push_back(vector_to_json(p.amplitudes()));
        j["representation"] = "state_vectors";
    } else {
        for (const auto& s : spec.extreme_points()) points.push_back(matrix_to_json(s.matrix()));
        j["representation"] = "density_matrices";
    }
    j["extreme_points"] = std::move(points);
    return j;
}

}  // namespace robtherm
