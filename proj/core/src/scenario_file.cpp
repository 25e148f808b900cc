#include "voltstab/scenario_file.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <variant>
#include <vector>

#include "voltstab/errors.hpp"

namespace voltstab::io {

namespace {

// ---------------------------------------------------------------------------
// Minimal TOML subset: [table], [[array-of-tables]], key = value with value a
// number, a basic "string", or a single-line array of numbers.

using Value = std::variant<double, std::string, std::vector<double>>;

struct Entry {
  Value value;
  std::size_t line = 0;
};

struct Table {
  std::string name;
  std::size_t line = 0;
  std::map<std::string, Entry> entries;
};

constexpr std::string_view kWhitespace = " \t\r";

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(kWhitespace);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(kWhitespace);
  return s.substr(first, last - first + 1);
}

std::string_view strip_comment(std::string_view line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_string && c == '\\') {
      ++i;
    } else if (c == '"') {
      in_string = !in_string;
    } else if (c == '#' && !in_string) {
      return line.substr(0, i);
    }
  }
  return line;
}

bool is_bare_key(std::string_view key) {
  if (key.empty()) return false;
  for (char c : key) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '_' || c == '-';
    if (!ok) return false;
  }
  return true;
}

std::optional<double> parse_number(std::string_view text) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

Value parse_value(std::string_view text, std::size_t line) {
  if (text.empty()) throw ConfigError("missing value", line);
  if (text.front() == '"') {
    std::string out;
    std::size_t i = 1;
    for (; i < text.size() && text[i] != '"'; ++i) {
      if (text[i] == '\\') {
        if (++i >= text.size()) break;
        switch (text[i]) {
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          default: throw ConfigError("unsupported escape in string", line);
        }
      } else {
        out += text[i];
      }
    }
    if (i >= text.size()) throw ConfigError("unterminated string", line);
    if (!trim(text.substr(i + 1)).empty()) {
      throw ConfigError("unexpected text after string", line);
    }
    return out;
  }
  if (text.front() == '[') {
    if (text.back() != ']') throw ConfigError("unterminated array", line);
    std::vector<double> out;
    auto body = trim(text.substr(1, text.size() - 2));
    while (!body.empty()) {
      const auto comma = body.find(',');
      const auto item = trim(body.substr(0, comma));
      if (item.empty()) {
        // A trailing comma is allowed.
        if (comma == std::string_view::npos) break;
        throw ConfigError("empty array element", line);
      }
      const auto num = parse_number(item);
      if (!num) throw ConfigError("array elements must be numbers", line);
      out.push_back(*num);
      if (comma == std::string_view::npos) break;
      body = trim(body.substr(comma + 1));
    }
    return out;
  }
  if (const auto num = parse_number(text)) return *num;
  throw ConfigError("cannot parse value '" + std::string(text) + "'", line);
}

struct Document {
  std::map<std::string, Table> tables;
  std::vector<Table> disturbances;
};

const std::set<std::string, std::less<>> kSections = {"model", "network", "load",
                                                      "benchmark", "simulation"};

Document read_document(std::string_view text) {
  Document doc;
  Table* current = nullptr;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    const auto raw =
        text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    const auto line = trim(strip_comment(raw));
    if (line.empty()) continue;

    if (line.starts_with("[[")) {
      if (!line.ends_with("]]")) throw ConfigError("malformed array-of-tables header", line_no);
      const auto name = trim(line.substr(2, line.size() - 4));
      if (name != "disturbance") {
        throw ConfigError("unknown array-of-tables '" + std::string(name) +
                              "' (only [[disturbance]] is repeatable)",
                          line_no);
      }
      doc.disturbances.push_back({std::string(name), line_no, {}});
      current = &doc.disturbances.back();
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("malformed section header", line_no);
      const std::string name(trim(line.substr(1, line.size() - 2)));
      if (name == "disturbance") {
        throw ConfigError("use [[disturbance]] for disturbance entries", line_no);
      }
      if (!kSections.contains(name)) {
        throw ConfigError("unknown section [" + name + "]", line_no);
      }
      const auto [it, inserted] = doc.tables.try_emplace(name, Table{name, line_no, {}});
      if (!inserted) throw ConfigError("duplicate section [" + name + "]", line_no);
      current = &it->second;
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'", line_no);
    const auto key = trim(line.substr(0, eq));
    if (!is_bare_key(key)) throw ConfigError("invalid key '" + std::string(key) + "'", line_no);
    if (current == nullptr) {
      throw ConfigError("key '" + std::string(key) + "' outside of any section", line_no);
    }
    auto value = parse_value(trim(line.substr(eq + 1)), line_no);
    const auto [it, inserted] =
        current->entries.try_emplace(std::string(key), Entry{std::move(value), line_no});
    if (!inserted) throw ConfigError("duplicate key '" + std::string(key) + "'", line_no);
  }
  return doc;
}

// ---------------------------------------------------------------------------
// Typed access with schema enforcement.

class Reader {
 public:
  Reader(const Table& table, std::set<std::string> allowed) : table_(table) {
    for (const auto& [key, entry] : table.entries) {
      if (!allowed.contains(key)) {
        throw ConfigError("unknown key '" + key + "' in [" + table.name + "]", entry.line);
      }
    }
  }

  bool has(const std::string& key) const { return table_.entries.contains(key); }

  std::size_t line_of(const std::string& key) const {
    const auto it = table_.entries.find(key);
    return it == table_.entries.end() ? table_.line : it->second.line;
  }

  double number(const std::string& key) const {
    const auto& e = require(key);
    if (const auto* d = std::get_if<double>(&e.value)) return *d;
    throw ConfigError("'" + key + "' must be a number", e.line);
  }

  double number_or(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
  }

  std::string string(const std::string& key) const {
    const auto& e = require(key);
    if (const auto* s = std::get_if<std::string>(&e.value)) return *s;
    throw ConfigError("'" + key + "' must be a string", e.line);
  }

  template <std::size_t N>
  std::array<double, N> array_or(const std::string& key, std::array<double, N> fallback) const {
    if (!has(key)) return fallback;
    const auto& e = require(key);
    const auto* v = std::get_if<std::vector<double>>(&e.value);
    if (v == nullptr || v->size() != N) {
      throw ConfigError("'" + key + "' must be an array of " + std::to_string(N) + " numbers",
                        e.line);
    }
    std::array<double, N> out{};
    std::copy(v->begin(), v->end(), out.begin());
    return out;
  }

 private:
  const Entry& require(const std::string& key) const {
    const auto it = table_.entries.find(key);
    if (it == table_.entries.end()) {
      throw ConfigError("missing key '" + key + "' in [" + table_.name + "]", table_.line);
    }
    return it->second;
  }

  const Table& table_;
};

const Table& require_table(const Document& doc, const std::string& name) {
  const auto it = doc.tables.find(name);
  if (it == doc.tables.end()) throw ConfigError("missing section [" + name + "]");
  return it->second;
}

void forbid_table(const Document& doc, const std::string& name, std::string_view kind) {
  if (const auto it = doc.tables.find(name); it != doc.tables.end()) {
    throw ConfigError("section [" + name + "] does not apply to " + std::string(kind) +
                          " scenarios",
                      it->second.line);
  }
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <std::size_t N>
std::string fmt(const std::array<double, N>& values) {
  std::string out = "[";
  for (std::size_t i = 0; i < N; ++i) {
    if (i) out += ", ";
    out += fmt(values[i]);
  }
  return out + "]";
}

}  // namespace

sim::Scenario parse_scenario(std::string_view text) {
  const Document doc = read_document(text);
  sim::Scenario scenario;

  const Table& model_table = require_table(doc, "model");
  const Reader model(model_table, {"kind", "policy"});
  const std::string kind = model.string("kind");
  if (kind == "dynamic_load") {
    scenario.params.model = sim::ModelKind::DynamicLoad;
  } else if (kind == "benchmark") {
    scenario.params.model = sim::ModelKind::Benchmark;
  } else {
    throw ConfigError("model.kind must be \"dynamic_load\" or \"benchmark\"",
                      model.line_of("kind"));
  }
  const bool dl = scenario.params.model == sim::ModelKind::DynamicLoad;

  if (model.has("policy")) {
    if (!dl) throw ConfigError("model.policy applies only to dynamic_load", model.line_of("policy"));
    const std::string policy = model.string("policy");
    if (policy == "maximum") {
      scenario.policy = sim::RootPolicy::Maximum;
    } else if (policy == "minimum") {
      scenario.policy = sim::RootPolicy::Minimum;
    } else {
      throw ConfigError("model.policy must be \"maximum\" or \"minimum\"",
                        model.line_of("policy"));
    }
  }

  if (dl) {
    forbid_table(doc, "benchmark", kind);
    const Reader net(require_table(doc, "network"), {"v1", "r", "x"});
    scenario.params.network.v1 = net.number("v1");
    scenario.params.network.r = net.number("r");
    scenario.params.network.x = net.number("x");

    const Reader load(require_table(doc, "load"),
                      {"p0", "q0", "a", "b", "tp", "tq", "pt_coeffs", "qt_coeffs"});
    auto& l = scenario.params.load;
    l.p0 = load.number("p0");
    l.q0 = load.number("q0");
    l.a = load.number("a");
    l.b = load.number("b");
    l.tp = load.number("tp");
    l.tq = load.number("tq");
    l.pt_coeffs = load.array_or("pt_coeffs", l.pt_coeffs);
    l.qt_coeffs = load.array_or("qt_coeffs", l.qt_coeffs);
  } else {
    forbid_table(doc, "network", kind);
    forbid_table(doc, "load", kind);
    const Reader bench(require_table(doc, "benchmark"), {"v1", "r", "c", "h_coeffs"});
    auto& b = scenario.params.bench;
    b.v1 = bench.number("v1");
    b.r = bench.number("r");
    b.c = bench.number("c");
    b.h_coeffs = bench.array_or("h_coeffs", b.h_coeffs);
  }

  const Table& sim_table = require_table(doc, "simulation");
  const Reader simr(sim_table, {"duration", "dt", "output_stride", "initial_v2", "initial_x",
                                "initial_y", "steady_state_at"});
  scenario.duration = simr.number("duration");
  scenario.dt = simr.number_or("dt", scenario.dt);
  if (simr.has("output_stride")) {
    const double stride = simr.number("output_stride");
    if (!(stride >= 1.0) || stride != static_cast<double>(static_cast<std::size_t>(stride))) {
      throw ConfigError("simulation.output_stride must be a positive integer",
                        simr.line_of("output_stride"));
    }
    scenario.output_stride = static_cast<std::size_t>(stride);
  }

  const int forms = static_cast<int>(simr.has("initial_v2")) +
                    static_cast<int>(simr.has("initial_x") || simr.has("initial_y")) +
                    static_cast<int>(simr.has("steady_state_at"));
  if (forms != 1) {
    throw ConfigError(
        "[simulation] needs exactly one initial condition: initial_v2, "
        "initial_x + initial_y, or steady_state_at",
        sim_table.line);
  }
  if (simr.has("initial_v2")) {
    if (dl) throw ConfigError("initial_v2 applies only to benchmark", simr.line_of("initial_v2"));
    scenario.initial = sim::InitialVoltage{simr.number("initial_v2")};
  } else if (simr.has("steady_state_at")) {
    if (!dl) {
      throw ConfigError("steady_state_at applies only to dynamic_load",
                        simr.line_of("steady_state_at"));
    }
    scenario.initial = sim::SteadyStateAt{simr.number("steady_state_at")};
  } else {
    if (!dl) throw ConfigError("initial_x/initial_y apply only to dynamic_load", sim_table.line);
    scenario.initial = sim::LoadState{simr.number("initial_x"), simr.number("initial_y")};
  }

  for (const Table& t : doc.disturbances) {
    const Reader d(t, {"at_time", "target", "delta"});
    sim::Disturbance dist;
    dist.at_time = d.number("at_time");
    dist.delta = d.number("delta");
    try {
      dist.target = sim::parse_target(d.string("target"));
    } catch (const UnknownTarget& e) {
      throw ConfigError(e.what(), d.line_of("target"));
    }
    scenario.disturbances.push_back(dist);
  }

  try {
    sim::validate(scenario);
  } catch (const ConfigError& e) {
    if (e.line() != 0) throw;
    throw ConfigError(e.what(), sim_table.line);
  }
  return scenario;
}

sim::Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open scenario file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scenario(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string serialize_scenario(const sim::Scenario& s) {
  const bool dl = s.params.model == sim::ModelKind::DynamicLoad;
  std::ostringstream out;
  out << "[model]\n";
  out << "kind = \"" << (dl ? "dynamic_load" : "benchmark") << "\"\n";
  if (dl) {
    out << "policy = \"" << (s.policy == sim::RootPolicy::Maximum ? "maximum" : "minimum")
        << "\"\n";
    const auto& n = s.params.network;
    out << "\n[network]\nv1 = " << fmt(n.v1) << "\nr = " << fmt(n.r) << "\nx = " << fmt(n.x)
        << "\n";
    const auto& l = s.params.load;
    out << "\n[load]\np0 = " << fmt(l.p0) << "\nq0 = " << fmt(l.q0) << "\na = " << fmt(l.a)
        << "\nb = " << fmt(l.b) << "\ntp = " << fmt(l.tp) << "\ntq = " << fmt(l.tq)
        << "\npt_coeffs = " << fmt(l.pt_coeffs) << "\nqt_coeffs = " << fmt(l.qt_coeffs)
        << "\n";
  } else {
    const auto& b = s.params.bench;
    out << "\n[benchmark]\nv1 = " << fmt(b.v1) << "\nr = " << fmt(b.r) << "\nc = " << fmt(b.c)
        << "\nh_coeffs = " << fmt(b.h_coeffs) << "\n";
  }

  out << "\n[simulation]\nduration = " << fmt(s.duration) << "\ndt = " << fmt(s.dt)
      << "\noutput_stride = " << s.output_stride << "\n";
  std::visit(
      [&out](const auto& init) {
        using T = std::decay_t<decltype(init)>;
        if constexpr (std::is_same_v<T, sim::LoadState>) {
          out << "initial_x = " << fmt(init.x) << "\ninitial_y = " << fmt(init.y) << "\n";
        } else if constexpr (std::is_same_v<T, sim::InitialVoltage>) {
          out << "initial_v2 = " << fmt(init.v2) << "\n";
        } else {
          out << "steady_state_at = " << fmt(init.v2) << "\n";
        }
      },
      s.initial);

  for (const auto& d : s.disturbances) {
    out << "\n[[disturbance]]\nat_time = " << fmt(d.at_time) << "\ntarget = \""
        << sim::to_string(d.target) << "\"\ndelta = " << fmt(d.delta) << "\n";
  }
  return out.str();
}

}  // namespace voltstab::io
