#include "coopdyn/serialize.hpp"

#include "coopdyn/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <string>
#include <vector>

namespace coopdyn {

namespace {

using nlohmann::json;

json parse(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
}

void check_header(const json& j, const char* kind) {
    if (!j.is_object() || !j.contains("kind") || j["kind"] != kind)
        throw ConfigError(std::string("expected a \"") + kind + "\" document");
    if (!j.contains("schema_version") || !j["schema_version"].is_number_integer() ||
        j["schema_version"].get<int>() != kSchemaVersion)
        throw ConfigError("unsupported schema_version");
}

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
    if (!j.is_array()) throw ConfigError("matrix field must be an array of rows");
    if (j.empty()) return {};
    const std::size_t cols = j.front().size();
    Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < j.size(); ++r) {
        if (!j[r].is_array() || j[r].size() != cols)
            throw ConfigError("matrix rows must have equal lengths");
        for (std::size_t c = 0; c < cols; ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = j[r][c].get<double>();
    }
    return m;
}

json layout_to_json_obj(const SpaceLayout& layout) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "space_layout";
    j["spin_groups"] = layout.spin_counts();
    json groups = json::array();
    for (const BosonGroupLayout& g : layout.boson_groups())
        groups.push_back({{"modes", g.modes}, {"cutoff", g.cutoff}});
    j["boson_groups"] = std::move(groups);
    return j;
}

SpaceLayout layout_from_json_obj(const json& j) {
    check_header(j, "space_layout");
    std::vector<int> spins = j.at("spin_groups").get<std::vector<int>>();
    std::vector<BosonGroupLayout> groups;
    for (const json& g : j.at("boson_groups"))
        groups.push_back({g.at("modes").get<int>(), g.at("cutoff").get<int>()});
    return SpaceLayout(std::move(spins), std::move(groups));
}

json bath_to_json(const BathSpec& bath) {
    return {{"mode_frequencies", bath.mode_frequencies},
            {"couplings", matrix_to_json(bath.couplings)},
            {"cutoff", bath.cutoff}};
}

BathSpec bath_from_json(const json& j) {
    BathSpec b;
    b.mode_frequencies = j.at("mode_frequencies").get<std::vector<double>>();
    b.couplings = matrix_from_json(j.at("couplings"));
    b.cutoff = j.at("cutoff").get<int>();
    return b;
}

} // namespace

std::string to_json(const SpaceLayout& layout) { return layout_to_json_obj(layout).dump(); }

SpaceLayout layout_from_json(const std::string& text) { return layout_from_json_obj(parse(text)); }

std::string to_json(const StateVector& state) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "state_vector";
    j["layout"] = layout_to_json_obj(state.layout);
    json amps = json::array();
    for (Eigen::Index i = 0; i < state.amplitudes.size(); ++i)
        amps.push_back({state.amplitudes[i].real(), state.amplitudes[i].imag()});
    j["amplitudes"] = std::move(amps);
    return j.dump();
}

StateVector state_from_json(const std::string& text) {
    const json j = parse(text);
    check_header(j, "state_vector");
    StateVector s;
    s.layout = layout_from_json_obj(j.at("layout"));
    const json& amps = j.at("amplitudes");
    if (amps.size() != s.layout.total_dim())
        throw ConfigError("state amplitudes do not match the layout dimension");
    s.amplitudes.resize(static_cast<Eigen::Index>(amps.size()));
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (!amps[i].is_array() || amps[i].size() != 2)
            throw ConfigError("amplitudes must be [re, im] pairs");
        s.amplitudes[static_cast<Eigen::Index>(i)] =
            cplx(amps[i][0].get<double>(), amps[i][1].get<double>());
    }
    return s;
}

std::string to_json(const OperatorMatrix& op) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "operator";
    j["dim"] = op.dim();
    j["hermitian"] = op.hermitian;
    std::vector<Eigen::Triplet<cplx>> trips;
    trips.reserve(static_cast<std::size_t>(op.entries.nonZeros()));
    for (int k = 0; k < op.entries.outerSize(); ++k)
        for (SparseCd::InnerIterator it(op.entries, k); it; ++it)
            trips.emplace_back(it.row(), it.col(), it.value());
    std::sort(trips.begin(), trips.end(), [](const auto& a, const auto& b) {
        return a.row() != b.row() ? a.row() < b.row() : a.col() < b.col();
    });
    json entries = json::array();
    for (const auto& t : trips)
        entries.push_back({t.row(), t.col(), t.value().real(), t.value().imag()});
    j["triplets"] = std::move(entries);
    return j.dump();
}

OperatorMatrix operator_from_json(const std::string& text) {
    const json j = parse(text);
    check_header(j, "operator");
    const auto dim = j.at("dim").get<Eigen::Index>();
    if (dim < 0) throw ConfigError("operator dim must be non-negative");
    std::vector<Eigen::Triplet<cplx>> trips;
    for (const json& e : j.at("triplets")) {
        if (!e.is_array() || e.size() != 4)
            throw ConfigError("operator triplets must be [row, col, re, im]");
        const auto r = e[0].get<Eigen::Index>();
        const auto c = e[1].get<Eigen::Index>();
        if (r < 0 || r >= dim || c < 0 || c >= dim)
            throw ConfigError("operator triplet index out of range");
        trips.emplace_back(r, c, cplx(e[2].get<double>(), e[3].get<double>()));
    }
    SparseCd m(dim, dim);
    m.setFromTriplets(trips.begin(), trips.end());
    return make_operator(std::move(m), j.at("hermitian").get<bool>());
}

std::string to_json(const SystemSpec& spec) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "system_spec";
    j["group_a"] = {{"sites", spec.group_a.sites}, {"frequency", spec.group_a.frequency}};
    j["group_b"] = spec.group_b ? json{{"sites", spec.group_b->sites},
                                       {"frequency", spec.group_b->frequency}}
                                : json(nullptr);
    j["field_mode"] = spec.field_mode ? json{{"frequency", spec.field_mode->frequency},
                                             {"cutoff", spec.field_mode->cutoff}}
                                      : json(nullptr);
    j["inter_coupling"] = spec.inter_coupling;
    j["intra_coupling_a"] = matrix_to_json(spec.intra_coupling_a);
    j["intra_coupling_b"] = matrix_to_json(spec.intra_coupling_b);
    j["bath_a"] = spec.bath_a ? bath_to_json(*spec.bath_a) : json(nullptr);
    j["bath_b"] = spec.bath_b ? bath_to_json(*spec.bath_b) : json(nullptr);
    j["site_offsets_a"] = spec.site_offsets_a;
    j["site_offsets_b"] = spec.site_offsets_b;
    j["rwa"] = spec.rwa;
    j["bath_coupling"] = spec.bath_coupling == BathCoupling::ExcitationConserving
                             ? "excitation_conserving"
                             : "sigma_x";
    j["bath_basis"] = spec.bath_basis == BathBasis::Collective ? "collective" : "local";
    j["rng_seed"] = spec.rng_seed;
    j["dimension_budget"] = spec.dimension_budget;
    return j.dump();
}

SystemSpec spec_from_json(const std::string& text) {
    const json j = parse(text);
    check_header(j, "system_spec");
    SystemSpec s;
    s.group_a.sites = j.at("group_a").at("sites").get<int>();
    s.group_a.frequency = j.at("group_a").at("frequency").get<double>();
    if (j.contains("group_b") && !j["group_b"].is_null())
        s.group_b = SpinGroupSpec{j["group_b"].at("sites").get<int>(),
                                  j["group_b"].at("frequency").get<double>()};
    if (j.contains("field_mode") && !j["field_mode"].is_null())
        s.field_mode = FieldModeSpec{j["field_mode"].at("frequency").get<double>(),
                                     j["field_mode"].at("cutoff").get<int>()};
    s.inter_coupling = j.value("inter_coupling", 0.0);
    if (j.contains("intra_coupling_a")) s.intra_coupling_a = matrix_from_json(j["intra_coupling_a"]);
    if (j.contains("intra_coupling_b")) s.intra_coupling_b = matrix_from_json(j["intra_coupling_b"]);
    if (j.contains("bath_a") && !j["bath_a"].is_null()) s.bath_a = bath_from_json(j["bath_a"]);
    if (j.contains("bath_b") && !j["bath_b"].is_null()) s.bath_b = bath_from_json(j["bath_b"]);
    if (j.contains("site_offsets_a"))
        s.site_offsets_a = j["site_offsets_a"].get<std::vector<double>>();
    if (j.contains("site_offsets_b"))
        s.site_offsets_b = j["site_offsets_b"].get<std::vector<double>>();
    s.rwa = j.value("rwa", false);
    const std::string coupling = j.value("bath_coupling", std::string("excitation_conserving"));
    if (coupling == "excitation_conserving")
        s.bath_coupling = BathCoupling::ExcitationConserving;
    else if (coupling == "sigma_x")
        s.bath_coupling = BathCoupling::SigmaX;
    else
        throw ConfigError("unknown bath_coupling: " + coupling);
    const std::string basis = j.value("bath_basis", std::string("collective"));
    if (basis == "collective")
        s.bath_basis = BathBasis::Collective;
    else if (basis == "local")
        s.bath_basis = BathBasis::Local;
    else
        throw ConfigError("unknown bath_basis: " + basis);
    s.rng_seed = j.value("rng_seed", std::uint64_t(0));
    s.dimension_budget = j.value("dimension_budget", std::size_t(1) << 21);
    s.validate();
    return s;
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {
    if (columns_.empty()) throw ConfigError("CSV table needs at least one column");
}

void CsvTable::add_row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_.size())
        throw ConfigError("CSV row width does not match the header");
    rows_.push_back(cells);
}

std::string CsvTable::str() const {
    std::string out;
    for (std::size_t c = 0; c < columns_.size(); ++c) {
        if (c > 0) out += ',';
        out += columns_[c];
    }
    out += '\n';
    for (const auto& row : rows_) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c > 0) out += ',';
            out += row[c];
        }
        out += '\n';
    }
    return out;
}

std::string to_csv(const PropagationResult& result) {
    std::vector<std::string> cols{"time"};
    cols.insert(cols.end(), result.columns.begin(), result.columns.end());
    CsvTable table(std::move(cols));
    for (std::size_t k = 0; k < result.times.size(); ++k) {
        std::vector<std::string> row{CsvTable::cell(result.times[k])};
        for (Eigen::Index c = 0; c < result.values.cols(); ++c)
            row.push_back(CsvTable::cell(result.values(static_cast<Eigen::Index>(k), c)));
        table.add_row(row);
    }
    return table.str();
}

std::string to_csv(const RateScalingReport& report) {
    CsvTable table({"N", "n", "M", "m", "predicted", "measured", "abs_error"});
    for (const ScalingSample& s : report.samples)
        table.add_row({CsvTable::cell(s.point.N), CsvTable::cell(s.point.n),
                       CsvTable::cell(s.point.M), CsvTable::cell(s.point.m),
                       CsvTable::cell(s.predicted), CsvTable::cell(s.measured),
                       CsvTable::cell(s.abs_error)});
    return table.str();
}

} // namespace coopdyn
