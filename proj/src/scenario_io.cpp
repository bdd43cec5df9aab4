#include "dclc/scenario_io.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "dclc/error.hpp"

namespace dclc {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError(path.string(), "cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int line_of(const std::string& text, std::size_t byte) {
    int line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i)
        if (text[i] == '\n') ++line;
    return line;
}

json parse_json(const std::string& text, const std::string& source, int line_offset = 0) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        const int line = line_offset > 0 ? line_offset : line_of(text, e.byte > 0 ? e.byte - 1 : 0);
        std::string msg = e.what();
        if (auto p = msg.find("parse error"); p != std::string::npos) msg = msg.substr(p);
        throw ParseError(source, line, msg);
    }
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

// Strict view of one JSON object: every key must be consumed before done().
class Obj {
public:
    Obj(const json& j, std::string path, std::vector<std::string>* defaulted)
        : j_(j), path_(std::move(path)), defaulted_(defaulted) {
        if (!j_.is_object()) throw ValidationError(path_, "expected an object");
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    const json& raw(const std::string& key) {
        used_.insert(key);
        return j_.at(key);
    }

    std::string where(const std::string& key) const { return join(path_, key); }

    template <typename T>
    void req(const std::string& key, T& out) {
        if (!has(key)) throw ValidationError(where(key), "required field is missing");
        convert(raw(key), where(key), out);
    }

    template <typename T>
    void opt(const std::string& key, T& out) {
        if (has(key))
            convert(raw(key), where(key), out);
        else if (defaulted_)
            defaulted_->push_back(where(key));
    }

    void mark_default(const std::string& key) {
        if (defaulted_) defaulted_->push_back(where(key));
    }

    Obj child(const std::string& key) { return Obj(raw(key), where(key), defaulted_); }

    void done() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!used_.count(it.key())) throw ValidationError(where(it.key()), "unknown field");
    }

    std::vector<std::string>* defaulted() const { return defaulted_; }

    static void convert(const json& v, const std::string& where, double& out) {
        if (!v.is_number()) throw ValidationError(where, "expected a number");
        out = v.get<double>();
    }
    static void convert(const json& v, const std::string& where, int& out) {
        if (!v.is_number_integer()) throw ValidationError(where, "expected an integer");
        out = v.get<int>();
    }
    static void convert(const json& v, const std::string& where, bool& out) {
        if (!v.is_boolean()) throw ValidationError(where, "expected true or false");
        out = v.get<bool>();
    }
    static void convert(const json& v, const std::string& where, std::string& out) {
        if (!v.is_string()) throw ValidationError(where, "expected a string");
        out = v.get<std::string>();
    }
    static void convert(const json& v, const std::string& where, Month& out) {
        std::string s;
        convert(v, where, s);
        try {
            out = Month::parse(s);
        } catch (const ValidationError& e) {
            throw ValidationError(where, e.what());
        }
    }

private:
    const json& j_;
    std::string path_;
    std::vector<std::string>* defaulted_;
    std::set<std::string> used_;
};

template <typename E, typename F>
void read_enum(Obj& o, const std::string& key, E& out, F parse, bool required) {
    std::string s;
    if (required)
        o.req(key, s);
    else if (o.has(key))
        o.req(key, s);
    else {
        o.mark_default(key);
        return;
    }
    try {
        out = parse(s);
    } catch (const ValidationError& e) {
        throw ValidationError(o.where(key), "unknown value '" + s + "'");
    }
}

HardwareSku read_sku(Obj o) {
    HardwareSku h;
    o.req("id", h.id);
    o.req("lineage", h.lineage);
    read_enum(o, "kind", h.kind, parse_sku_kind, false);
    o.req("release_month", h.release_month);
    o.opt("availability_delay_months", h.availability_delay_months);
    o.req("peak_flops", h.peak_flops);
    o.req("mem_bandwidth", h.mem_bandwidth);
    o.req("mem_capacity", h.mem_capacity);
    o.req("tdp_server_watts", h.tdp_server_watts);
    o.opt("accelerators_per_server", h.accelerators_per_server);
    o.req("server_cost_usd", h.server_cost_usd);
    read_enum(o, "interconnect", h.interconnect, parse_interconnect, false);
    o.done();
    return h;
}

ModelSpec read_model(Obj o) {
    ModelSpec m;
    o.req("id", m.id);
    o.req("lineage", m.lineage);
    o.req("release_month", m.release_month);
    o.req("total_params", m.total_params);
    m.active_params = m.total_params;
    o.opt("active_params", m.active_params);
    read_enum(o, "architecture", m.architecture, parse_architecture, false);
    o.req("layers", m.layers);
    o.req("hidden_dim", m.hidden_dim);
    o.opt("bytes_per_param", m.bytes_per_param);
    o.req("kv_bytes_per_token", m.kv_bytes_per_token);
    o.opt("state_bytes", m.state_bytes);
    o.done();
    return m;
}

ojson write_sku(const HardwareSku& h) {
    ojson j;
    j["id"] = h.id;
    j["lineage"] = h.lineage;
    j["kind"] = to_string(h.kind);
    j["release_month"] = h.release_month.str();
    j["availability_delay_months"] = h.availability_delay_months;
    j["peak_flops"] = h.peak_flops;
    j["mem_bandwidth"] = h.mem_bandwidth;
    j["mem_capacity"] = h.mem_capacity;
    j["tdp_server_watts"] = h.tdp_server_watts;
    j["accelerators_per_server"] = h.accelerators_per_server;
    j["server_cost_usd"] = h.server_cost_usd;
    j["interconnect"] = to_string(h.interconnect);
    return j;
}

ojson write_model(const ModelSpec& m) {
    ojson j;
    j["id"] = m.id;
    j["lineage"] = m.lineage;
    j["release_month"] = m.release_month.str();
    j["total_params"] = m.total_params;
    j["active_params"] = m.active_params;
    j["architecture"] = to_string(m.architecture);
    j["layers"] = m.layers;
    j["hidden_dim"] = m.hidden_dim;
    j["bytes_per_param"] = m.bytes_per_param;
    j["kv_bytes_per_token"] = m.kv_bytes_per_token;
    j["state_bytes"] = m.state_bytes;
    return j;
}

template <typename T, typename F>
std::vector<T> parse_catalog(const std::string& text, const std::string& source, const std::string& kind, F read) {
    std::vector<T> out;
    std::istringstream in(text);
    std::string line;
    int n = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++n;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        const json j = parse_json(line, source, n);
        try {
            if (!header) {
                Obj h(j, "", nullptr);
                int version = 0;
                std::string k;
                h.req("schema_version", version);
                h.req("kind", k);
                h.done();
                if (version != kSchemaVersion)
                    throw ValidationError("schema_version", "unsupported version " + std::to_string(version));
                if (k != kind) throw ValidationError("kind", "expected '" + kind + "', got '" + k + "'");
                header = true;
                continue;
            }
            out.push_back(read(Obj(j, "", nullptr)));
            validate(out.back());
        } catch (const ValidationError& e) {
            throw ParseError(source, n, e.what());
        }
    }
    if (!header) throw ParseError(source, std::max(n, 1), "missing header record");
    return out;
}

GrowthRegime read_regime(Obj o) {
    GrowthRegime r;
    read_enum(o, "shape", r.shape, parse_growth_shape, true);
    o.opt("rate", r.rate);
    o.opt("flat_cost", r.flat_cost);
    o.done();
    return r;
}

ojson write_regime(const GrowthRegime& r) {
    ojson j;
    j["shape"] = to_string(r.shape);
    j["rate"] = r.rate;
    j["flat_cost"] = r.flat_cost;
    return j;
}

PowerSpec read_power(Obj o, PowerSpec p) {
    read_enum(o, "topology", p.topology, parse_power_topology, true);
    o.opt("domain_budget_watts", p.domain_budget_watts);
    o.opt("capex_multiplier", p.capex_multiplier);
    o.done();
    return p;
}

CoolingSpec read_cooling(Obj o, CoolingSpec c) {
    read_enum(o, "design", c.design, parse_cooling_design, true);
    o.opt("pue", c.pue);
    o.opt("capex_multiplier", c.capex_multiplier);
    o.opt("density_limit_watts", c.density_limit_watts);
    o.opt("throttle_factor", c.throttle_factor);
    o.opt("maintenance_multiplier", c.maintenance_multiplier);
    o.done();
    return c;
}

NetworkSpec read_network(Obj o, NetworkSpec n) {
    read_enum(o, "design", n.design, parse_network_design, true);
    o.opt("capex_multiplier", n.capex_multiplier);
    o.opt("opex_multiplier", n.opex_multiplier);
    o.opt("perf_factor", n.perf_factor);
    o.done();
    return n;
}

ojson write_power(const PowerSpec& p) {
    ojson j;
    j["topology"] = to_string(p.topology);
    j["domain_budget_watts"] = p.domain_budget_watts;
    j["capex_multiplier"] = p.capex_multiplier;
    return j;
}

ojson write_cooling(const CoolingSpec& c) {
    ojson j;
    j["design"] = to_string(c.design);
    j["pue"] = c.pue;
    j["capex_multiplier"] = c.capex_multiplier;
    j["density_limit_watts"] = c.density_limit_watts;
    j["throttle_factor"] = c.throttle_factor;
    j["maintenance_multiplier"] = c.maintenance_multiplier;
    return j;
}

ojson write_network(const NetworkSpec& n) {
    ojson j;
    j["design"] = to_string(n.design);
    j["capex_multiplier"] = n.capex_multiplier;
    j["opex_multiplier"] = n.opex_multiplier;
    j["perf_factor"] = n.perf_factor;
    return j;
}

// Options are an object keyed by option name; each entry overrides the
// defaults for that option only.
DesignOptions read_design_options(Obj o) {
    DesignOptions d = DesignOptions::defaults();
    if (o.has("power")) {
        Obj p = o.child("power");
        for (std::size_t i = 0; i < d.power.size(); ++i) {
            const std::string name(to_string(static_cast<PowerTopology>(i)));
            if (!p.has(name)) continue;
            json entry = p.raw(name);
            if (!entry.is_object()) throw ValidationError(p.where(name), "expected an object");
            entry["topology"] = name;
            d.power[i] = read_power(Obj(entry, p.where(name), nullptr), d.power[i]);
        }
        p.done();
    }
    if (o.has("cooling")) {
        Obj c = o.child("cooling");
        for (std::size_t i = 0; i < d.cooling.size(); ++i) {
            const std::string name(to_string(static_cast<CoolingDesign>(i)));
            if (!c.has(name)) continue;
            json entry = c.raw(name);
            if (!entry.is_object()) throw ValidationError(c.where(name), "expected an object");
            entry["design"] = name;
            d.cooling[i] = read_cooling(Obj(entry, c.where(name), nullptr), d.cooling[i]);
        }
        c.done();
    }
    if (o.has("network")) {
        Obj n = o.child("network");
        for (std::size_t i = 0; i < d.network.size(); ++i) {
            const std::string name(to_string(static_cast<NetworkDesign>(i)));
            if (!n.has(name)) continue;
            json entry = n.raw(name);
            if (!entry.is_object()) throw ValidationError(n.where(name), "expected an object");
            entry["design"] = name;
            d.network[i] = read_network(Obj(entry, n.where(name), nullptr), d.network[i]);
        }
        n.done();
    }
    o.done();
    return d;
}

ojson write_design_options(const DesignOptions& d) {
    ojson j;
    for (const auto& p : d.power) {
        ojson e = write_power(p);
        e.erase("topology");
        j["power"][std::string(to_string(p.topology))] = e;
    }
    for (const auto& c : d.cooling) {
        ojson e = write_cooling(c);
        e.erase("design");
        j["cooling"][std::string(to_string(c.design))] = e;
    }
    for (const auto& n : d.network) {
        ojson e = write_network(n);
        e.erase("design");
        j["network"][std::string(to_string(n.design))] = e;
    }
    return j;
}

// Each part may be an option name looked up in the options table or a full
// object.
InfrastructureDesign read_design(Obj o, const DesignOptions& options) {
    InfrastructureDesign d = options.make(PowerTopology::per_pdu, CoolingDesign::air, NetworkDesign::nvlink, {});
    auto part = [&](const std::string& key, auto lookup, auto read_obj) {
        if (!o.has(key)) {
            o.mark_default(key);
            return;
        }
        const json& v = o.raw(key);
        if (v.is_string()) {
            try {
                lookup(v.get<std::string>());
            } catch (const ValidationError&) {
                throw ValidationError(o.where(key), "unknown option '" + v.get<std::string>() + "'");
            }
        } else {
            read_obj(Obj(v, o.where(key), o.defaulted()));
        }
    };
    part(
        "power", [&](const std::string& s) { d.power = options.power[static_cast<int>(parse_power_topology(s))]; },
        [&](Obj x) { d.power = read_power(std::move(x), options.power[0]); });
    part(
        "cooling", [&](const std::string& s) { d.cooling = options.cooling[static_cast<int>(parse_cooling_design(s))]; },
        [&](Obj x) { d.cooling = read_cooling(std::move(x), options.cooling[0]); });
    part(
        "network", [&](const std::string& s) { d.network = options.network[static_cast<int>(parse_network_design(s))]; },
        [&](Obj x) { d.network = read_network(std::move(x), options.network[2]); });
    o.opt("facility_capacity_watts", d.facility_capacity_watts);
    o.opt("idle_power_fraction", d.idle_power_fraction);
    o.done();
    return d;
}

ojson write_design(const InfrastructureDesign& d) {
    ojson j;
    j["power"] = write_power(d.power);
    j["cooling"] = write_cooling(d.cooling);
    j["network"] = write_network(d.network);
    j["facility_capacity_watts"] = d.facility_capacity_watts;
    j["idle_power_fraction"] = d.idle_power_fraction;
    return j;
}

RefreshPolicy read_refresh(Obj o) {
    RefreshPolicy r;
    o.opt("default_lifetime_months", r.default_lifetime_months);
    if (o.has("lifetime_months_by_generation")) {
        const json& m = o.raw("lifetime_months_by_generation");
        const std::string where = o.where("lifetime_months_by_generation");
        if (!m.is_object()) throw ValidationError(where, "expected an object");
        for (auto it = m.begin(); it != m.end(); ++it) {
            int v = 0;
            Obj::convert(it.value(), join(where, it.key()), v);
            r.lifetime_months_by_generation[it.key()] = v;
        }
    }
    read_enum(o, "purchase_mode", r.purchase_mode, parse_purchase_mode, false);
    o.done();
    validate(r);
    return r;
}

OperationPolicy read_operations(Obj o) {
    OperationPolicy p;
    for (int i = 0; i < OperationPolicy::kFlagCount; ++i) {
        bool on = false;
        o.opt(OperationPolicy::flag_names[i], on);
        p.set_flag(i, on);
    }
    o.opt("migration_window_months", p.migration_window_months);
    o.opt("quant_compute_factor", p.quant_compute_factor);
    o.opt("quant_memory_factor", p.quant_memory_factor);
    o.opt("kv_byte_factor", p.kv_byte_factor);
    o.opt("alt_active_fraction", p.alt_active_fraction);
    o.opt("small_model_fraction", p.small_model_fraction);
    o.opt("headroom_factor", p.headroom_factor);
    o.done();
    validate(p);
    return p;
}

ojson write_refresh(const RefreshPolicy& r) {
    ojson j;
    j["default_lifetime_months"] = r.default_lifetime_months;
    j["lifetime_months_by_generation"] = ojson::object();
    for (const auto& [k, v] : r.lifetime_months_by_generation) j["lifetime_months_by_generation"][k] = v;
    j["purchase_mode"] = to_string(r.purchase_mode);
    return j;
}

ojson write_operations(const OperationPolicy& p) {
    ojson j;
    for (int i = 0; i < OperationPolicy::kFlagCount; ++i) j[OperationPolicy::flag_names[i]] = p.flag(i);
    j["migration_window_months"] = p.migration_window_months;
    j["quant_compute_factor"] = p.quant_compute_factor;
    j["quant_memory_factor"] = p.quant_memory_factor;
    j["kv_byte_factor"] = p.kv_byte_factor;
    j["alt_active_fraction"] = p.alt_active_fraction;
    j["small_model_fraction"] = p.small_model_fraction;
    j["headroom_factor"] = p.headroom_factor;
    return j;
}

template <typename T, std::size_t N>
void read_array(Obj& o, const std::string& key, std::array<T, N>& out) {
    if (!o.has(key)) {
        o.mark_default(key);
        return;
    }
    const json& v = o.raw(key);
    if (!v.is_array() || v.size() != N)
        throw ValidationError(o.where(key), "expected an array of " + std::to_string(N) + " numbers");
    for (std::size_t i = 0; i < N; ++i) Obj::convert(v[i], o.where(key) + "[" + std::to_string(i) + "]", out[i]);
}

template <typename T>
void read_range(Obj o, T& out) {
    o.req("min", out.min);
    if constexpr (requires { out.mode; }) o.req("mode", out.mode);
    o.req("max", out.max);
    o.done();
}

ScenarioDistribution read_distribution(Obj o, const Scenario& base) {
    ScenarioDistribution d;
    d.base = base;
    if (o.has("demand_growth")) read_range(o.child("demand_growth"), d.demand_growth);
    if (o.has("model_regimes")) {
        Obj r = o.child("model_regimes");
        for (int i = 0; i < 3; ++i)
            if (r.has(std::string(regime_name(i)))) d.model_regimes[i] = read_regime(r.child(std::string(regime_name(i))));
        r.done();
    }
    read_array(o, "model_regime_weights", d.model_regime_weights);
    if (o.has("hardware_regimes")) {
        Obj r = o.child("hardware_regimes");
        for (int i = 0; i < 3; ++i)
            if (r.has(std::string(regime_name(i))))
                d.hardware_regimes[i] = read_regime(r.child(std::string(regime_name(i))));
        r.done();
    }
    read_array(o, "hardware_regime_weights", d.hardware_regime_weights);
    if (o.has("availability_delay_months")) read_range(o.child("availability_delay_months"), d.availability_delay_months);
    if (o.has("energy_tariff")) read_range(o.child("energy_tariff"), d.energy_tariff);
    o.opt("price_jitter", d.price_jitter);
    o.done();
    validate(d);
    return d;
}

template <typename T, typename Loader, typename Reader>
void read_roadmap(Obj o, const std::filesystem::path& base_dir, const char* inline_key, std::vector<T>& seeds,
                  std::optional<GrowthRegime>& regime, Loader load, Reader read, int* delay) {
    const bool has_catalog = o.has("catalog");
    const bool has_inline = o.has(inline_key);
    if (has_catalog == has_inline)
        throw ValidationError(o.where("catalog"), std::string("give exactly one of 'catalog' or '") + inline_key + "'");
    if (has_catalog) {
        std::string file;
        o.req("catalog", file);
        seeds = load(base_dir / file);
    } else {
        const json& v = o.raw(inline_key);
        if (!v.is_array()) throw ValidationError(o.where(inline_key), "expected an array");
        for (std::size_t i = 0; i < v.size(); ++i)
            seeds.push_back(read(Obj(v[i], o.where(inline_key) + "[" + std::to_string(i) + "]", o.defaulted())));
    }
    if (o.has("projection")) regime = read_regime(o.child("projection"));
    if (delay) o.opt("synthetic_delay_months", *delay);
    o.done();
}

}  // namespace

std::vector<HardwareSku> parse_hardware_catalog(const std::string& text, const std::string& source) {
    return parse_catalog<HardwareSku>(text, source, "hardware-catalog", read_sku);
}

std::vector<ModelSpec> parse_model_catalog(const std::string& text, const std::string& source) {
    return parse_catalog<ModelSpec>(text, source, "model-catalog", read_model);
}

std::vector<HardwareSku> load_hardware_catalog(const std::filesystem::path& path) {
    return parse_hardware_catalog(read_file(path), path.string());
}

std::vector<ModelSpec> load_model_catalog(const std::filesystem::path& path) {
    return parse_model_catalog(read_file(path), path.string());
}

ScenarioDocument parse_scenario_document(const std::string& text, const std::string& source,
                                         const std::filesystem::path& base_dir) {
    const json j = parse_json(text, source);
    ScenarioDocument doc;
    Scenario& s = doc.scenario;
    Obj o(j, "", &s.defaulted_fields);

    o.req("schema_version", s.schema_version);
    if (s.schema_version != kSchemaVersion)
        throw ValidationError("schema_version", "unsupported version " + std::to_string(s.schema_version) +
                                                    " (expected " + std::to_string(kSchemaVersion) + ")");
    o.req("start_month", s.start_month);
    o.opt("horizon_months", s.demand.horizon_months);

    if (o.has("demand")) {
        Obj d = o.child("demand");
        d.opt("base_rps", s.demand.base_rps);
        d.opt("annual_growth", s.demand.annual_growth);
        read_array(d, "diurnal_shape", s.demand.diurnal_shape);
        d.done();
    } else {
        o.mark_default("demand");
    }
    if (o.has("workload")) {
        Obj w = o.child("workload");
        w.opt("seq_len_prompt", s.workload.seq_len_prompt);
        w.opt("seq_len_decode", s.workload.seq_len_decode);
        w.opt("batch_size", s.workload.batch_size);
        w.done();
    }
    if (o.has("slo")) {
        Obj w = o.child("slo");
        w.opt("ttft_ms_max", s.slo.ttft_ms_max);
        w.opt("tbt_ms_max", s.slo.tbt_ms_max);
        w.done();
    }
    if (o.has("perf")) {
        Obj w = o.child("perf");
        w.opt("gpu_efficiency", s.perf.gpu_efficiency);
        w.opt("cpu_efficiency", s.perf.cpu_efficiency);
        w.opt("tp_penalty", s.perf.tp_penalty);
        w.opt("usable_memory_fraction", s.perf.usable_memory_fraction);
        w.opt("amortization_years", s.perf.amortization_years);
        read_enum(w, "tp_selection", s.perf.tp_selection, parse_tp_selection, false);
        w.done();
    }

    if (!o.has("model_roadmap")) throw ValidationError("model_roadmap", "required field is missing");
    read_roadmap(o.child("model_roadmap"), base_dir, "models", s.model_seeds, s.model_regime, load_model_catalog,
                 read_model, nullptr);
    if (!o.has("hardware_roadmap")) throw ValidationError("hardware_roadmap", "required field is missing");
    read_roadmap(o.child("hardware_roadmap"), base_dir, "skus", s.hardware_seeds, s.hardware_regime,
                 load_hardware_catalog, read_sku, &s.synthetic_delay_months);

    o.opt("demand_lineage", s.demand_lineage);
    o.opt("small_lineage", s.small_lineage);

    if (o.has("initial_fleet")) {
        const json& v = o.raw("initial_fleet");
        if (!v.is_array()) throw ValidationError("initial_fleet", "expected an array");
        for (std::size_t i = 0; i < v.size(); ++i) {
            Obj c(v[i], "initial_fleet[" + std::to_string(i) + "]", &s.defaulted_fields);
            InitialCohort ic;
            c.req("sku", ic.sku);
            if (c.has("count")) {
                const json& n = c.raw("count");
                if (n.is_string() && n.get<std::string>() == "auto")
                    ic.count = -1;
                else if (n.is_number_integer() && n.get<long long>() >= 0)
                    ic.count = n.get<long long>();
                else
                    throw ValidationError(c.where("count"), "expected a non-negative integer or \"auto\"");
            } else {
                c.mark_default("count");
            }
            c.done();
            s.initial_fleet.push_back(ic);
        }
    }

    if (o.has("design_options")) s.design_options = read_design_options(o.child("design_options"));
    if (o.has("design"))
        s.design = read_design(o.child("design"), s.design_options);
    else {
        o.mark_default("design");
        s.design = s.design_options.make(PowerTopology::per_pdu, CoolingDesign::air, NetworkDesign::nvlink, s.design);
    }

    if (o.has("prices")) {
        Obj p = o.child("prices");
        PriceBook& b = s.prices;
        p.opt("network_capex_per_server", b.network_capex_per_server);
        p.opt("building_capex_per_sqft", b.building_capex_per_sqft);
        p.opt("power_capex_per_watt", b.power_capex_per_watt);
        p.opt("cooling_capex_per_watt", b.cooling_capex_per_watt);
        p.opt("network_opex_per_server_yr", b.network_opex_per_server_yr);
        p.opt("energy_tariff_per_mwh", b.energy_tariff_per_mwh);
        p.opt("peak_demand_charge_per_kw_month", b.peak_demand_charge_per_kw_month);
        p.opt("maintenance_per_server_yr", b.maintenance_per_server_yr);
        p.opt("software_per_server_yr", b.software_per_server_yr);
        p.opt("sqft_per_server", b.sqft_per_server);
        p.done();
    }
    if (o.has("schedule")) {
        Obj p = o.child("schedule");
        p.opt("facility_years", s.schedule.facility_years);
        p.opt("network_years", s.schedule.network_years);
        p.opt("it_years", s.schedule.it_years);
        read_enum(p, "method", s.schedule.method, parse_depreciation_method, false);
        p.done();
    }

    validate(s);

    doc.policy.design = {s.design.power.topology, s.design.cooling.design, s.design.network.design};
    if (o.has("policy")) {
        Obj p = o.child("policy");
        if (p.has("refresh")) doc.policy.refresh = read_refresh(p.child("refresh"));
        if (p.has("operations")) doc.policy.op = read_operations(p.child("operations"));
        p.done();
    }
    doc.distribution = ScenarioDistribution::degenerate(s);
    if (o.has("uncertainty")) doc.distribution = read_distribution(o.child("uncertainty"), s);
    o.done();
    return doc;
}

ScenarioDocument load_scenario_document(const std::filesystem::path& path) {
    return parse_scenario_document(read_file(path), path.string(), path.parent_path());
}

Scenario load_scenario(const std::filesystem::path& path) { return load_scenario_document(path).scenario; }

std::string serialize_scenario(const Scenario& s) {
    ojson j;
    j["schema_version"] = s.schema_version;
    j["start_month"] = s.start_month.str();
    j["horizon_months"] = s.demand.horizon_months;
    j["demand"]["base_rps"] = s.demand.base_rps;
    j["demand"]["annual_growth"] = s.demand.annual_growth;
    j["demand"]["diurnal_shape"] = s.demand.diurnal_shape;
    j["workload"]["seq_len_prompt"] = s.workload.seq_len_prompt;
    j["workload"]["seq_len_decode"] = s.workload.seq_len_decode;
    j["workload"]["batch_size"] = s.workload.batch_size;
    j["slo"]["ttft_ms_max"] = s.slo.ttft_ms_max;
    j["slo"]["tbt_ms_max"] = s.slo.tbt_ms_max;
    j["perf"]["gpu_efficiency"] = s.perf.gpu_efficiency;
    j["perf"]["cpu_efficiency"] = s.perf.cpu_efficiency;
    j["perf"]["tp_penalty"] = s.perf.tp_penalty;
    j["perf"]["usable_memory_fraction"] = s.perf.usable_memory_fraction;
    j["perf"]["amortization_years"] = s.perf.amortization_years;
    j["perf"]["tp_selection"] = to_string(s.perf.tp_selection);

    ojson models = ojson::array();
    for (const auto& m : s.model_seeds) models.push_back(write_model(m));
    j["model_roadmap"]["models"] = models;
    if (s.model_regime) j["model_roadmap"]["projection"] = write_regime(*s.model_regime);
    ojson skus = ojson::array();
    for (const auto& h : s.hardware_seeds) skus.push_back(write_sku(h));
    j["hardware_roadmap"]["skus"] = skus;
    if (s.hardware_regime) j["hardware_roadmap"]["projection"] = write_regime(*s.hardware_regime);
    j["hardware_roadmap"]["synthetic_delay_months"] = s.synthetic_delay_months;

    j["demand_lineage"] = s.demand_lineage;
    j["small_lineage"] = s.small_lineage;
    j["initial_fleet"] = ojson::array();
    for (const auto& c : s.initial_fleet) {
        ojson e;
        e["sku"] = c.sku;
        if (c.count < 0)
            e["count"] = "auto";
        else
            e["count"] = c.count;
        j["initial_fleet"].push_back(e);
    }
    j["design_options"] = write_design_options(s.design_options);
    j["design"] = write_design(s.design);

    const PriceBook& b = s.prices;
    j["prices"]["network_capex_per_server"] = b.network_capex_per_server;
    j["prices"]["building_capex_per_sqft"] = b.building_capex_per_sqft;
    j["prices"]["power_capex_per_watt"] = b.power_capex_per_watt;
    j["prices"]["cooling_capex_per_watt"] = b.cooling_capex_per_watt;
    j["prices"]["network_opex_per_server_yr"] = b.network_opex_per_server_yr;
    j["prices"]["energy_tariff_per_mwh"] = b.energy_tariff_per_mwh;
    j["prices"]["peak_demand_charge_per_kw_month"] = b.peak_demand_charge_per_kw_month;
    j["prices"]["maintenance_per_server_yr"] = b.maintenance_per_server_yr;
    j["prices"]["software_per_server_yr"] = b.software_per_server_yr;
    j["prices"]["sqft_per_server"] = b.sqft_per_server;
    j["schedule"]["facility_years"] = s.schedule.facility_years;
    j["schedule"]["network_years"] = s.schedule.network_years;
    j["schedule"]["it_years"] = s.schedule.it_years;
    j["schedule"]["method"] = to_string(s.schedule.method);
    return j.dump(2) + "\n";
}

std::string serialize_policy(const PolicyBundle& b) {
    ojson j;
    j["design"]["power"] = to_string(b.design.power);
    j["design"]["cooling"] = to_string(b.design.cooling);
    j["design"]["network"] = to_string(b.design.network);
    j["refresh"] = write_refresh(b.refresh);
    j["operations"] = write_operations(b.op);
    return j.dump(2);
}

// ---- reports ----

namespace {

std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string usd(double v) { return format_cents(to_cents(v)); }
std::string ratio(double v) { return std::isnan(v) ? "" : format_fixed(v, 3); }

Table make(std::string name, std::vector<std::string> cols, std::vector<bool> numeric) {
    Table t;
    t.name = std::move(name);
    t.columns = std::move(cols);
    t.numeric = std::move(numeric);
    return t;
}

}  // namespace

std::string render_csv(const Table& t) {
    std::string out;
    for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + csv_cell(t.columns[i]);
    out += "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_cell(row[i]);
        out += "\n";
    }
    return out;
}

std::string render_json(const Table& t) {
    std::string out = "[\n";
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        out += "  {";
        for (std::size_t i = 0; i < t.columns.size(); ++i) {
            out += (i ? ", " : "") + json(t.columns[i]).dump() + ": ";
            const std::string& cell = t.rows[r][i];
            if (t.numeric[i])
                out += cell.empty() ? "null" : cell;
            else
                out += json(cell).dump();
        }
        out += r + 1 < t.rows.size() ? "},\n" : "}\n";
    }
    return out + "]\n";
}

ReportFormat parse_report_format(std::string_view text) {
    if (text == "csv") return ReportFormat::csv;
    if (text == "json") return ReportFormat::json;
    throw ValidationError("format", "expected csv or json, got '" + std::string(text) + "'");
}

Table fleet_timeline_table(const SimulationResult& r, std::uint64_t seed) {
    Table t = make("fleet_timeline", {"seed", "month", "sku", "servers"}, {true, false, false, true});
    for (const auto& st : r.fleet_timeline) {
        std::map<std::string, long long> by_sku;
        for (const auto& c : st.cohorts) by_sku[c.sku_id] += c.servers;
        for (const auto& [sku, n] : by_sku)
            t.rows.push_back({std::to_string(seed), st.month.str(), sku, std::to_string(n)});
    }
    return t;
}

Table fleet_totals_table(const SimulationResult& r, std::uint64_t seed) {
    Table t = make("fleet_totals", {"seed", "month", "servers", "peak_demand_rps", "mean_demand_rps"},
                   {true, false, true, true, true});
    for (const auto& st : r.fleet_timeline)
        t.rows.push_back({std::to_string(seed), st.month.str(), std::to_string(st.total_servers()),
                          format_fixed(st.peak_demand_rps, 3), format_fixed(st.mean_demand_rps, 3)});
    return t;
}

Table annual_tco_table(const SimulationResult& r, std::uint64_t seed) {
    Table t = make("annual_tco", {"seed", "year", "component", "usd"}, {true, true, false, true});
    for (const auto& y : r.annual_tco) {
        const auto comps = y.tco.components();
        for (std::size_t i = 0; i < comps.size(); ++i)
            t.rows.push_back({std::to_string(seed), std::to_string(y.year), std::string(TcoBreakdown::component_names[i]),
                              format_cents(comps[i])});
        t.rows.push_back({std::to_string(seed), std::to_string(y.year), "total", format_cents(y.tco.total)});
    }
    return t;
}

Table snapshot_table(const FacilitySnapshot& f, const std::string& sku) {
    Table t = make("snapshot", {"sku", "quantity", "value"}, {false, false, true});
    t.rows.push_back({sku, "servers", std::to_string(f.servers)});
    t.rows.push_back({sku, "stranded_watts", format_fixed(f.stranded_watts, 1)});
    t.rows.push_back({sku, "facility_energy_mwh", format_fixed(f.facility_energy_mwh, 1)});
    const auto comps = f.tco.components();
    for (std::size_t i = 0; i < comps.size(); ++i)
        t.rows.push_back({sku, std::string(TcoBreakdown::component_names[i]) + "_usd", format_cents(comps[i])});
    t.rows.push_back({sku, "total_usd", format_cents(f.tco.total)});
    return t;
}

Table events_table(const SimulationResult& r, std::uint64_t seed) {
    Table t = make("events", {"seed", "month", "kind", "subject", "count"}, {true, false, false, false, true});
    for (const auto& e : r.event_log)
        t.rows.push_back({std::to_string(seed), e.month.str(), std::string(to_string(e.kind)), e.subject,
                          std::to_string(e.count)});
    return t;
}

std::string simulation_summary(const SimulationResult& r, const PolicyBundle& bundle, std::uint64_t seed) {
    ojson j;
    j["schema_version"] = kSchemaVersion;
    j["seed"] = seed;
    j["status"] = r.status == SimulationStatus::completed ? "completed" : "capacity_exhausted";
    j["halted_at"] = r.halted_at ? ojson(r.halted_at->str()) : ojson(nullptr);
    j["policy"] = bundle.label();
    j["lifetime_tco_usd"] = format_cents(r.lifetime_tco);
    ojson years = ojson::array();
    for (const auto& y : r.annual_tco) {
        ojson e;
        e["year"] = y.year;
        e["total_usd"] = format_cents(y.tco.total);
        years.push_back(e);
    }
    j["annual_totals"] = years;
    if (!r.fleet_timeline.empty()) j["final_servers"] = r.fleet_timeline.back().total_servers();
    return j.dump(2) + "\n";
}

Table candidates_table(const std::vector<CandidateResult>& cs, std::uint64_t seed) {
    Table t = make("candidates", {"seed", "candidate", "power", "cooling", "network", "refresh", "operations"},
                   {true, true, false, false, false, false, false});
    for (std::size_t i = 0; i < cs.size(); ++i) {
        const auto& b = cs[i].bundle;
        std::string ops;
        for (int f = 0; f < OperationPolicy::kFlagCount; ++f)
            if (b.op.flag(f)) ops += (ops.empty() ? "" : "+") + std::string(OperationPolicy::flag_names[f]);
        std::string refresh = b.label();
        refresh = refresh.substr(refresh.find('|') + 1);
        refresh = refresh.substr(0, refresh.rfind('|'));
        t.rows.push_back({std::to_string(seed), std::to_string(i), std::string(to_string(b.design.power)),
                          std::string(to_string(b.design.cooling)), std::string(to_string(b.design.network)), refresh,
                          ops.empty() ? "none" : ops});
    }
    return t;
}

Table distribution_table(const std::vector<CandidateResult>& cs, std::uint64_t seed) {
    Table t = make("distribution", {"seed", "candidate", "statistic", "value"}, {true, true, false, true});
    for (std::size_t i = 0; i < cs.size(); ++i) {
        const auto& d = cs[i].dist;
        auto row = [&](const std::string& stat, const std::string& v) {
            t.rows.push_back({std::to_string(seed), std::to_string(i), stat, v});
        };
        auto money = [&](double v) { return std::isnan(v) ? std::string() : usd(v); };
        row("trials", std::to_string(d.trials));
        row("completed", std::to_string(d.completed));
        row("capacity_exhausted", std::to_string(d.capacity_exhausted));
        row("mean_usd", money(d.mean));
        row("stddev_usd", money(d.stddev));
        row("std_error_usd", money(d.std_error()));
        for (std::size_t k = 0; k < kPercentileLevels.size(); ++k)
            row("p" + std::to_string(kPercentileLevels[k]) + "_usd", money(d.percentiles[k]));
        row("ratio_to_baseline", ratio(d.ratio_to_baseline));
    }
    return t;
}

Table per_trial_table(const std::vector<CandidateResult>& cs, std::uint64_t seed) {
    Table t = make("per_trial", {"seed", "candidate", "trial", "usd"}, {true, true, true, true});
    for (std::size_t i = 0; i < cs.size(); ++i)
        for (std::size_t k = 0; k < cs[i].dist.per_trial.size(); ++k) {
            const double v = cs[i].dist.per_trial[k];
            t.rows.push_back({std::to_string(seed), std::to_string(i), std::to_string(k), std::isnan(v) ? "" : usd(v)});
        }
    return t;
}

Table regime_matrix_table(const std::vector<RegimeCell>& cells, std::uint64_t seed) {
    Table t = make("regime_matrix", {"seed", "model_regime", "hardware_regime", "ratio_to_baseline", "best_policy"},
                   {true, false, false, true, false});
    for (const auto& c : cells)
        t.rows.push_back({std::to_string(seed), std::string(regime_name(c.model_regime)),
                          std::string(regime_name(c.hardware_regime)), ratio(c.baseline_ratio), c.best.label()});
    return t;
}

std::string optimize_summary(const OptimizeResult& r, Objective objective, std::uint64_t seed) {
    ojson j;
    j["schema_version"] = kSchemaVersion;
    j["seed"] = seed;
    j["objective"] = to_string(objective);
    j["candidates"] = r.candidates.size();
    j["best_policy"] = r.best.label();
    j["best"] = ojson::parse(serialize_policy(r.best));
    const bool p95 = objective == Objective::p95;
    auto money = [](double v) { return std::isnan(v) ? ojson(nullptr) : ojson(usd(v)); };
    j["best_objective_usd"] = money(r.best_dist.objective_value(p95));
    j["baseline_objective_usd"] = money(r.baseline_dist.objective_value(p95));
    j["ratio_to_baseline"] = ratio(r.baseline_ratio);
    j["best_capacity_exhausted"] = r.best_dist.capacity_exhausted;
    return j.dump(2) + "\n";
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    if (!out) throw Error("cannot write " + path.string());
}

void write_table(const std::filesystem::path& out_dir, const Table& t, ReportFormat format) {
    if (format == ReportFormat::csv)
        write_text(out_dir / (t.name + ".csv"), render_csv(t));
    else
        write_text(out_dir / (t.name + ".json"), render_json(t));
}

std::string run_metadata(const std::string& command, std::uint64_t seed, int trials, const std::string& scenario_path) {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    ojson j;
    j["tool"] = "dclc";
    j["tool_version"] = kToolVersion;
    j["schema_version"] = kSchemaVersion;
    j["command"] = command;
    j["seed"] = seed;
    j["trials"] = trials;
    j["scenario"] = scenario_path;
    j["timestamp"] = buf;
    return j.dump(2) + "\n";
}

}  // namespace dclc
