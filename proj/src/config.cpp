#include "funnelsim/config.hpp"

#include <algorithm>
#include <charconv>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "funnelsim/errors.hpp"
#include "funnelsim/linear.hpp"

namespace funnelsim {

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"sim", {"horizon", "dt", "integrator", "decimation", "max_halvings", "u_cap", "k_cap"}},
      {"plant", {"f", "gamma", "disturbance", "y0", "h"}},
      {"operator",
       {"kind", "atoms", "density", "c", "b", "N", "channel", "panels", "Q", "R", "S", "eta0", "inner",
        "passthrough", "state_map", "F_offset", "F1", "F2", "F3", "bi_A", "bi_b", "bi_c"}},
      {"controller", {"r", "guard", "phi_0", "phi_1", "phi_2", "phi_3", "phi_4", "phi_5", "phi_6", "phi_7"}},
      {"reference", {"kind", "amp", "omega", "phase", "coeffs", "value"}},
  };
  return keys;
}

std::string trim(std::string s) {
  const auto not_space = [](unsigned char ch) { return !std::isspace(ch); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::string unquote(std::string s) {
  s = trim(std::move(s));
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
    s = s.substr(1, s.size() - 2);
  }
  return s;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) {
    parts.push_back(trim(item));
  }
  if (!text.empty() && text.back() == sep) {
    parts.emplace_back();
  }
  return parts;
}

double to_number(const std::string& text, const std::string& where) {
  const std::string s = trim(text);
  double value = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && *first == '+') {
    ++first;
  }
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (s.empty() || ec != std::errc() || ptr != last) {
    throw ConfigError(where + ": '" + s + "' is not a number");
  }
  return value;
}

std::vector<double> to_list(const std::string& text, const std::string& where) {
  std::vector<double> out;
  for (const auto& part : split(text, ',')) {
    out.push_back(to_number(part, where));
  }
  return out;
}

// Rows separated by ';', entries by ','.
Eigen::MatrixXd to_matrix(const std::string& text, const std::string& where) {
  std::vector<std::vector<double>> rows;
  for (const auto& row : split(text, ';')) {
    rows.push_back(to_list(row, where));
  }
  if (rows.empty()) {
    throw ConfigError(where + ": empty matrix");
  }
  const std::size_t cols = rows.front().size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) {
      throw ConfigError(where + ": ragged matrix rows");
    }
    for (std::size_t j = 0; j < cols; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return m;
}

Eigen::VectorXd to_vector(const std::string& text, const std::string& where) {
  const auto values = to_list(text, where);
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

// "tag:args" -> (tag, args)
std::pair<std::string, std::string> tagged(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    return {trim(text), ""};
  }
  return {trim(text.substr(0, colon)), trim(text.substr(colon + 1))};
}

std::size_t to_count(const std::string& text, const std::string& where) {
  const double v = to_number(text, where);
  if (!(v >= 0.0) || v != std::floor(v) || v > 1e12) {
    throw ConfigError(where + ": expected a non-negative integer");
  }
  return static_cast<std::size_t>(v);
}

class Section {
public:
  Section(const ConfigTable& table, std::string name) : name_(std::move(name)) {
    if (const auto it = table.find(name_); it != table.end()) {
      values_ = &it->second;
    }
  }

  bool has(const std::string& key) const { return values_ && values_->count(key) > 0; }

  std::optional<std::string> text(const std::string& key) const {
    if (!has(key)) {
      return std::nullopt;
    }
    return values_->at(key);
  }
  std::string text(const std::string& key, const std::string& fallback) const {
    return text(key).value_or(fallback);
  }
  std::string required(const std::string& key) const {
    if (auto v = text(key)) {
      return *v;
    }
    throw ConfigError("missing [" + name_ + "] " + key);
  }
  double number(const std::string& key, double fallback) const {
    return has(key) ? to_number(values_->at(key), where(key)) : fallback;
  }
  double number(const std::string& key) const { return to_number(required(key), where(key)); }
  std::size_t count(const std::string& key, std::size_t fallback) const {
    return has(key) ? to_count(values_->at(key), where(key)) : fallback;
  }
  std::string where(const std::string& key) const { return "[" + name_ + "] " + key; }

private:
  std::string name_;
  const std::map<std::string, std::string>* values_ = nullptr;
};

FunnelFunction parse_funnel(const std::string& text, const std::string& where) {
  const auto [tag, args] = tagged(text);
  const auto p = to_list(args, where);
  if (tag == "expshift") {
    if (p.size() != 3) {
      throw ConfigError(where + ": expshift needs a,b,c");
    }
    if (!(p[0] >= 0.0) || !(p[1] > 0.0) || !(p[2] > 0.0)) {
      throw ConfigError(where + ": expshift needs a >= 0, b > 0, c > 0");
    }
    return FunnelFunction::exp_shift(p[0], p[1], p[2]);
  }
  if (tag == "const") {
    if (p.size() != 1 || !(p[0] > 0.0)) {
      throw ConfigError(where + ": const needs one lambda > 0");
    }
    return FunnelFunction::constant(p[0]);
  }
  throw ConfigError(where + ": unknown funnel family '" + tag + "'");
}

ReferenceSignal parse_reference(const Section& s) {
  const std::string kind = s.text("kind", "cos");
  if (kind == "cos") {
    return ReferenceSignal(CosineReference{s.number("amp", 1.0), s.number("omega", 1.0), s.number("phase", 0.0)});
  }
  if (kind == "poly") {
    return ReferenceSignal(PolynomialReference{to_list(s.required("coeffs"), s.where("coeffs"))});
  }
  if (kind == "const") {
    return ReferenceSignal(ConstantReference{s.number("value", 0.0)});
  }
  throw ConfigError("[reference] kind must be cos, poly or const");
}

std::optional<Density> parse_density(const std::string& text, const std::filesystem::path& base_dir) {
  const auto [tag, args] = tagged(text);
  if (tag == "none" || tag.empty()) {
    return std::nullopt;
  }
  if (tag == "expsqrt") {
    return Density::exp_sqrt();
  }
  if (tag == "exp") {
    const double rate = args.empty() ? 1.0 : to_number(args, "[operator] density");
    if (!(rate > 0.0)) {
      throw ConfigError("[operator] density exp:rate needs rate > 0");
    }
    return Density::exponential(rate);
  }
  if (tag == "file") {
    std::filesystem::path path(args);
    if (path.is_relative()) {
      path = base_dir / path;
    }
    try {
      return Density::from_file(path);
    } catch (const std::exception& e) {
      throw ConfigError(std::string("[operator] density file: ") + e.what());
    }
  }
  throw ConfigError("[operator] density must be expsqrt, exp:RATE, file:PATH or none");
}

Measure parse_measure(const Section& s, const std::filesystem::path& base_dir) {
  std::vector<Atom> atoms;
  if (auto text = s.text("atoms"); text && !trim(*text).empty()) {
    try {
      atoms = parse_atoms(*text);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("[operator] atoms: ") + e.what());
    }
  }
  auto density = parse_density(s.text("density", "none"), base_dir);
  try {
    return Measure(std::move(atoms), std::move(density));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("[operator] measure: ") + e.what());
  }
}

struct OperatorContext {
  std::size_t input_dim;
  double dt;
  double horizon;
  const ConfigOverrides& overrides;
  std::filesystem::path base_dir;
  std::vector<std::string>& notes;
};

std::unique_ptr<InternalOperator> build_lti(const Section& s, std::size_t input_dim) {
  const Eigen::MatrixXd Q = to_matrix(s.required("Q"), s.where("Q"));
  Eigen::MatrixXd R = to_matrix(s.required("R"), s.where("R"));
  Eigen::MatrixXd S = to_matrix(s.required("S"), s.where("S"));
  const auto n = Q.rows();
  if (Q.cols() != n) {
    throw ConfigError("[operator] Q must be square");
  }
  // A row vector R with n entries is read as a column; a single column drives channel 0.
  if (R.rows() == 1 && R.cols() == n && n != 1) {
    R.transposeInPlace();
  }
  if (R.rows() != n) {
    throw ConfigError("[operator] R needs " + std::to_string(n) + " rows");
  }
  if (R.cols() == 1 && input_dim > 1) {
    Eigen::MatrixXd padded = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(input_dim));
    padded.col(0) = R.col(0);
    R = padded;
  }
  if (R.cols() != static_cast<Eigen::Index>(input_dim)) {
    throw ConfigError("[operator] R needs " + std::to_string(input_dim) + " columns");
  }
  if (S.cols() != n) {
    throw ConfigError("[operator] S needs " + std::to_string(n) + " columns");
  }
  Eigen::VectorXd eta0 = Eigen::VectorXd::Zero(n);
  if (auto text = s.text("eta0")) {
    eta0 = to_vector(*text, s.where("eta0"));
    if (eta0.size() != n) {
      throw ConfigError("[operator] eta0 needs " + std::to_string(n) + " entries");
    }
  }
  return std::make_unique<LTIInternal>(Q, R, S, eta0);
}

std::unique_ptr<InternalOperator> build_leaf(const std::string& kind, const Section& s, const OperatorContext& ctx) {
  if (kind == "zero") {
    return std::make_unique<ZeroOperator>(ctx.input_dim, 1);
  }
  if (kind == "lti") {
    return build_lti(s, ctx.input_dim);
  }
  if (kind == "convolution" || kind == "transport") {
    const Measure measure = parse_measure(s, ctx.base_dir);
    const std::size_t channel = s.count("channel", 0);
    if (channel >= ctx.input_dim) {
      throw ConfigError("[operator] channel out of range");
    }
    const std::size_t panels = ctx.overrides.panels.value_or(s.count("panels", kDefaultPanelsPerUnit));
    if (panels == 0) {
      throw ConfigError("[operator] panels must be >= 1");
    }
    if (kind == "convolution") {
      ConvolutionOptions opts;
      opts.channel = channel;
      opts.panels_per_unit = panels;
      return std::make_unique<ConvolutionOperator>(measure, ctx.input_dim, opts);
    }
    TransportOptions opts;
    opts.speed = s.number("c", 1.0);
    opts.truncation = s.number("b", 10.0);
    opts.cells = ctx.overrides.cells.value_or(s.count("N", 0));
    opts.dt = ctx.dt;
    opts.channel = channel;
    if (!(opts.speed > 0.0) || !(opts.truncation > 0.0)) {
      throw ConfigError("[operator] transport needs c > 0 and b > 0");
    }
    std::unique_ptr<TransportPDE> pde;
    try {
      pde = std::make_unique<TransportPDE>(measure, ctx.input_dim, opts);
    } catch (const CflViolation& e) {
      throw ConfigError(std::string("[operator] ") + e.what());
    }
    std::ostringstream note;
    note << "transport grid: N = " << pde->cells() << ", dxi = " << pde->spacing()
         << ", courant = " << opts.speed * ctx.dt / pde->spacing() << ", domain = [0, " << pde->domain_end()
         << "], truncated tail mass = " << pde->truncation_tail_mass();
    ctx.notes.push_back(note.str());
    if (pde->domain_end() < opts.speed * ctx.horizon) {
      ctx.notes.push_back("transport domain is shorter than c * horizon; the truncation error is bounded by the "
                          "tail mass above");
    }
    return pde;
  }
  throw ConfigError("[operator] unknown kind '" + kind + "'");
}

Passthrough parse_passthrough(const std::string& text) {
  const auto [tag, args] = tagged(text);
  if (tag == "identity") {
    return {Passthrough::Kind::identity, 0.0};
  }
  if (tag == "tanh") {
    return {Passthrough::Kind::tanh, 0.0};
  }
  if (tag == "delay") {
    const double h = to_number(args, "[operator] passthrough delay");
    if (!(h >= 0.0)) {
      throw ConfigError("[operator] passthrough delay must be >= 0");
    }
    return {Passthrough::Kind::delay, h};
  }
  throw ConfigError("[operator] passthrough must be identity, delay:H or tanh");
}

StateMap parse_state_map(const std::string& text) {
  const auto [tag, args] = tagged(text);
  if (tag == "none") {
    return {};
  }
  const auto w = to_list(args, "[operator] state_map");
  if (tag == "linear") {
    return {StateMap::Kind::linear, w};
  }
  if (tag == "tanh") {
    return {StateMap::Kind::tanh_linear, w};
  }
  throw ConfigError("[operator] state_map must be none, linear:W or tanh:W");
}

std::unique_ptr<InternalOperator> build_operator(const Section& s, const OperatorContext& ctx, double& gamma_auto) {
  std::string kind = s.required("kind");
  if (ctx.overrides.realization) {
    const std::string& want = *ctx.overrides.realization;
    if (want != "convolution" && want != "transport") {
      throw ConfigError("realization must be convolution or transport");
    }
    if (kind != "convolution" && kind != "transport") {
      throw ConfigError("realization override needs a convolution or transport operator");
    }
    kind = want;
  }

  if (kind == "bi-form") {
    LinearTriple sys{to_matrix(s.required("bi_A"), s.where("bi_A")), to_vector(s.required("bi_b"), s.where("bi_b")),
                     to_vector(s.required("bi_c"), s.where("bi_c"))};
    if (sys.A.rows() != sys.A.cols() || sys.b.size() != sys.A.rows() || sys.c.size() != sys.A.rows()) {
      throw ConfigError("[operator] bi_A must be n x n with bi_b, bi_c of length n");
    }
    const auto form = [&] {
      try {
        return bi_transform(sys);
      } catch (const NoRelativeDegree& e) {
        throw ConfigError(std::string("[operator] ") + e.what());
      }
    }();
    if (form.relative_degree != ctx.input_dim) {
      throw ConfigError("[operator] bi-form relative degree " + std::to_string(form.relative_degree) +
                        " does not match [controller] r");
    }
    gamma_auto = form.gamma;
    const auto k = static_cast<Eigen::Index>(form.internal_dim());
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(k, static_cast<Eigen::Index>(ctx.input_dim));
    R.col(0) = form.R;
    ObservationMap F;
    F.f1.assign(form.P.data(), form.P.data() + form.P.size());
    F.f3 = {1.0};
    auto inner = std::make_unique<LTIInternal>(form.Q, R, form.S, Eigen::VectorXd::Zero(k));
    return std::make_unique<ComposedOperator>(Passthrough{}, std::move(inner), StateMap{}, F);
  }

  if (kind == "composed") {
    const std::string inner_kind = s.text("inner", "lti");
    if (inner_kind == "composed" || inner_kind == "bi-form") {
      throw ConfigError("[operator] inner must be lti, convolution, transport or zero");
    }
    auto inner = build_leaf(inner_kind, s, ctx);
    ObservationMap F;
    F.offset = s.number("F_offset", 0.0);
    if (auto t = s.text("F1")) F.f1 = to_list(*t, s.where("F1"));
    if (auto t = s.text("F2")) F.f2 = to_list(*t, s.where("F2"));
    if (auto t = s.text("F3")) F.f3 = to_list(*t, s.where("F3"));
    try {
      return std::make_unique<ComposedOperator>(parse_passthrough(s.text("passthrough", "identity")),
                                                std::move(inner), parse_state_map(s.text("state_map", "none")), F);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("[operator] ") + e.what());
    }
  }
  return build_leaf(kind, s, ctx);
}

// Keys that only make sense for some operator kinds.
void check_operator_keys(const Section& s, const std::string& kind) {
  static const std::map<std::string, std::set<std::string>> allowed = {
      {"zero", {}},
      {"convolution", {"atoms", "density", "channel", "panels", "c", "b", "N"}},
      {"transport", {"atoms", "density", "channel", "panels", "c", "b", "N"}},
      {"lti", {"Q", "R", "S", "eta0"}},
      {"composed",
       {"inner", "passthrough", "state_map", "F_offset", "F1", "F2", "F3", "Q", "R", "S", "eta0", "atoms", "density",
        "channel", "panels", "c", "b", "N"}},
      {"bi-form", {"bi_A", "bi_b", "bi_c"}},
  };
  const auto it = allowed.find(kind);
  if (it == allowed.end()) {
    throw ConfigError("[operator] unknown kind '" + kind + "'");
  }
  for (const auto& key : schema().at("operator")) {
    if (key != "kind" && s.has(key) && it->second.count(key) == 0) {
      throw ConfigError("[operator] key '" + key + "' does not apply to kind " + kind);
    }
  }
}

Disturbance parse_disturbance(const std::string& text) {
  const auto [tag, args] = tagged(text);
  Disturbance d;
  if (tag == "zero") {
    return d;
  }
  const auto p = to_list(args, "[plant] disturbance");
  if (tag == "sin" && p.size() == 2) {
    d.kind = Disturbance::Kind::sinusoid;
    d.amplitude = {p[0]};
    d.omega = p[1];
    return d;
  }
  if (tag == "step" && p.size() == 2) {
    d.kind = Disturbance::Kind::step;
    d.amplitude = {p[0]};
    d.switch_time = p[1];
    return d;
  }
  throw ConfigError("[plant] disturbance must be zero, sin:AMP,OMEGA or step:AMP,T");
}

}  // namespace

Integrator parse_integrator(const std::string& text) {
  if (text == "rk4") {
    return Integrator::rk4;
  }
  if (text == "euler") {
    return Integrator::euler;
  }
  throw ConfigError("integrator must be euler or rk4");
}

namespace {

// "value   ; note" -> "value". A comment marker needs whitespace before it.
std::string strip_inline_comment(const std::string& value) {
  for (std::size_t i = 1; i < value.size(); ++i) {
    if ((value[i] == ';' || value[i] == '#') && std::isspace(static_cast<unsigned char>(value[i - 1]))) {
      const auto end = value.find_last_not_of(" \t", i - 1);
      return end == std::string::npos ? std::string() : value.substr(0, end + 1);
    }
  }
  return value;
}

}  // namespace

ConfigTable parse_config(const std::string& text) {
  boost::property_tree::ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config syntax: ") + e.what());
  }
  ConfigTable table;
  for (const auto& [section, body] : tree) {
    const auto known = schema().find(section);
    if (known == schema().end() || body.empty()) {
      throw ConfigError("unknown section or stray key '" + section + "'");
    }
    auto& out = table[section];
    for (const auto& [key, value] : body) {
      if (known->second.count(key) == 0) {
        throw ConfigError("unknown key [" + section + "] " + key);
      }
      out[key] = unquote(strip_inline_comment(value.data()));
    }
  }
  return table;
}

LoadedScenario build_scenario(const ConfigTable& table, const ConfigOverrides& overrides,
                              const std::filesystem::path& base_dir) {
  const Section sim(table, "sim");
  const Section plant_s(table, "plant");
  const Section op_s(table, "operator");
  const Section ctrl_s(table, "controller");
  const Section ref_s(table, "reference");

  LoadedScenario out;
  Scenario& sc = out.scenario;
  sc.horizon = overrides.horizon.value_or(sim.number("horizon", 10.0));
  sc.dt = overrides.dt.value_or(sim.number("dt", 0.01));
  sc.integrator = overrides.integrator.value_or(parse_integrator(sim.text("integrator", "rk4")));
  sc.decimation = sim.count("decimation", 1);
  sc.max_halvings = sim.count("max_halvings", 20);
  out.caps.u_cap = sim.number("u_cap", 1e3);
  out.caps.gain_cap = sim.number("k_cap", 1e3);
  if (!(sc.horizon > 0.0) || !(sc.dt > 0.0) || sc.dt > sc.horizon) {
    throw ConfigError("[sim] needs 0 < dt <= horizon");
  }
  if (sc.decimation == 0) {
    throw ConfigError("[sim] decimation must be >= 1");
  }

  // Controller.
  const std::size_t r = ctrl_s.count("r", 1);
  if (r == 0 || r > 8) {
    throw ConfigError("[controller] r must be between 1 and 8");
  }
  sc.controller.relative_degree = r;
  sc.controller.gain_guard = ctrl_s.number("guard", kDefaultGainGuard);
  for (std::size_t i = 0; i < r; ++i) {
    const std::string key = "phi_" + std::to_string(i);
    sc.controller.funnels.functions.push_back(parse_funnel(ctrl_s.required(key), ctrl_s.where(key)));
  }
  for (std::size_t i = r; i < 8; ++i) {
    if (ctrl_s.has("phi_" + std::to_string(i))) {
      throw ConfigError("[controller] phi_" + std::to_string(i) + " given but r = " + std::to_string(r));
    }
  }

  sc.reference = parse_reference(ref_s);

  // Operator.
  const std::string kind = op_s.text("kind", "zero");
  check_operator_keys(op_s, kind);
  const OperatorContext ctx{r, sc.dt, sc.horizon, overrides, base_dir, out.notes};
  double gamma_auto = std::nan("");
  std::shared_ptr<InternalOperator> op = build_operator(op_s, ctx, gamma_auto);
  out.op = op;

  // Plant.
  Plant& plant = sc.plant;
  plant.relative_degree = r;
  plant.output_dim = 1;
  plant.internal = op;
  plant.disturbance = parse_disturbance(plant_s.text("disturbance", "zero"));
  plant.memory = plant_s.number("h", 0.0);
  const auto q = static_cast<Eigen::Index>(op->output_dim());
  {
    const auto [tag, args] = tagged(plant_s.text("f", "affine:0,0,1"));
    if (tag != "affine") {
      throw ConfigError("[plant] f must be affine:F0,D,W...");
    }
    const auto p = to_list(args, "[plant] f");
    if (p.size() != static_cast<std::size_t>(2 + q)) {
      throw ConfigError("[plant] f needs F0, D and " + std::to_string(q) + " W entries");
    }
    AffineDrift f;
    f.F0 = Eigen::VectorXd::Constant(1, p[0]);
    f.D = Eigen::MatrixXd::Constant(1, 1, p[1]);
    f.W = Eigen::Map<const Eigen::MatrixXd>(p.data() + 2, 1, q);
    plant.drift = f;
  }
  {
    const std::string g = plant_s.text("gamma", "1");
    double gamma = 0.0;
    if (g == "auto") {
      if (std::isnan(gamma_auto)) {
        throw ConfigError("[plant] gamma = auto needs an operator of kind bi-form");
      }
      gamma = gamma_auto;
    } else {
      gamma = to_number(g, "[plant] gamma");
    }
    plant.gain = Eigen::MatrixXd(Eigen::MatrixXd::Constant(1, 1, gamma));
  }
  plant.initial_state = plant_s.has("y0") ? to_list(plant_s.required("y0"), "[plant] y0") : std::vector<double>(r);
  if (plant.initial_state.size() != r) {
    throw ConfigError("[plant] y0 needs r = " + std::to_string(r) + " values (y(0), y'(0), ...)");
  }

  try {
    sc.validate();
  } catch (const GainDegenerate& e) {
    throw ConfigError(std::string("[plant] ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return out;
}

std::vector<std::string> preset_names() { return {"paper-sec4", "dirac0", "delay", "bi-form-demo"}; }

std::optional<std::string> preset_text(const std::string& name) {
  if (name == "paper-sec4") {
    return R"(# Scalar plant driven by a transport equation:
#   y' = z(t, 0) + gamma u,  z_t = c z_xi + h(xi) y,  z(0, xi) = 0,
#   h(xi) = exp(-xi) / sqrt(xi) on [0, b].
# Reference cos t, y(0) = 0, funnel phi(t) = 1 / (2 exp(-2t) + 0.1).
#
# Provenance of the discretization: the original experiment used M = 1000
# time points on [0, T] with T = 15 and N = floor(M (b - a) / (alpha T)) space
# points, alpha = 0.4, a = 0, b = 10 (N = 1666, Courant number 2.5). That is
# outside the stability range of explicit upwinding, so the space grid here
# follows the time grid with Courant number 1 (N = 0 below means "derive
# from dt", giving N = 6667). The time grid is ten times finer than M = 1000:
# near the funnel boundary the closed loop is stiff (slope about 2 k^2) and
# dt = T / M would leave RK4's stability region and trigger step rejections.
[sim]
horizon = 15
dt = 0.0015
integrator = rk4
u_cap = 100
k_cap = 100

[plant]
f = affine:0,0,1
gamma = 1
y0 = 0

[operator]
kind = transport
density = expsqrt
c = 1
b = 10
N = 0

[controller]
r = 1
phi_0 = expshift:2,2,0.1

[reference]
kind = cos
amp = 1
omega = 1
phase = 0
)";
  }
  if (name == "dirac0") {
    return R"(# h = delta_0: the internal operator is the identity and the loop
# reduces to the scalar ODE y' = y + u.
[sim]
horizon = 10
dt = 0.0001
integrator = rk4
decimation = 10

[plant]
f = affine:0,0,1
gamma = 1
y0 = 0

[operator]
kind = convolution
atoms = 0:1

[controller]
r = 1
phi_0 = expshift:2,2,0.1

[reference]
kind = cos
)";
  }
  if (name == "delay") {
    return R"(# h = delta_{0.5}: the delay equation y'(t) = y(t - 0.5) + u(t) for
# t >= 0.5 and y'(t) = u(t) before. The delay is a multiple of dt, so the
# delayed samples are read exactly.
[sim]
horizon = 10
dt = 0.0025
integrator = rk4

[plant]
f = affine:0,0,1
gamma = 1
y0 = 0

[operator]
kind = convolution
atoms = 0.5:1

[controller]
r = 1
phi_0 = expshift:2,2,0.1

[reference]
kind = cos
)";
  }
  if (name == "bi-form-demo") {
    return R"(# Relative-degree-two linear plant x' = A x + b u, y = c.x, rewritten in
# Byrnes-Isidori coordinates: y'' = P0 y + P1 y' + S eta + gamma u with
# eta' = Q eta + R y. The internal operator composes the identity on
# (y, y') with the eta subsystem: w = P.(y, y') + S eta.
[sim]
horizon = 10
dt = 0.005
integrator = rk4

[plant]
f = affine:0,0,1
gamma = auto
y0 = 0,0

[operator]
kind = bi-form
bi_A = 0,1,0; 0,0,1; -1,-3,-3
bi_b = 0,0,1
bi_c = 2,1,0

[controller]
r = 2
phi_0 = expshift:2,2,0.1
phi_1 = expshift:3,2,0.2

[reference]
kind = cos
)";
  }
  return std::nullopt;
}

LoadedScenario load_scenario(const std::string& source, const ConfigOverrides& overrides) {
  if (auto text = preset_text(source)) {
    auto loaded = build_scenario(parse_config(*text), overrides);
    loaded.name = source;
    return loaded;
  }
  const std::filesystem::path path(source);
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("'" + source + "' is neither a preset (" + [] {
      std::string names;
      for (const auto& n : preset_names()) names += (names.empty() ? "" : ", ") + n;
      return names;
    }() + ") nor a readable config file");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  auto loaded = build_scenario(parse_config(buf.str()), overrides, path.parent_path());
  loaded.name = path.stem().string();
  return loaded;
}

}  // namespace funnelsim
