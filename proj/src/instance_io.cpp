#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "vmr/instance.hpp"

namespace vmr {

namespace {

struct Line {
  int number = 0;
  std::vector<std::string> tokens;
};

std::vector<Line> tokenize(std::istream& in) {
  std::vector<Line> lines;
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ss(raw);
    Line line{number, {}};
    for (std::string tok; ss >> tok;) line.tokens.push_back(std::move(tok));
    if (!line.tokens.empty()) lines.push_back(std::move(line));
  }
  return lines;
}

class Reader {
 public:
  explicit Reader(std::vector<Line> lines) : lines_(std::move(lines)) {}

  const Line& next(const char* expecting) {
    if (pos_ >= lines_.size()) {
      const int last = lines_.empty() ? 0 : lines_.back().number;
      throw SyntaxError(last, std::string("unexpected end of input, expected ") + expecting);
    }
    return lines_[pos_++];
  }

  bool done() const { return pos_ >= lines_.size(); }
  int line_number() const { return pos_ < lines_.size() ? lines_[pos_].number : (lines_.empty() ? 0 : lines_.back().number); }

  // "KEYWORD a b ..." with exactly `n_args` integer arguments.
  std::vector<long long> header(const std::string& keyword, std::size_t n_args) {
    const Line& line = next(keyword.c_str());
    if (line.tokens.front() != keyword) {
      throw SyntaxError(line.number, "expected " + keyword + ", found '" + line.tokens.front() + "'");
    }
    if (line.tokens.size() != n_args + 1) {
      throw SyntaxError(line.number, keyword + " takes " + std::to_string(n_args) + " argument(s)");
    }
    std::vector<long long> args;
    for (std::size_t i = 1; i < line.tokens.size(); ++i) args.push_back(to_int(line, i));
    return args;
  }

  const Line& record(const char* what, std::size_t min_tokens) {
    const Line& line = next(what);
    if (line.tokens.size() < min_tokens) {
      throw SyntaxError(line.number, std::string(what) + " record needs at least " + std::to_string(min_tokens) +
                                         " fields, found " + std::to_string(line.tokens.size()));
    }
    return line;
  }

  static long long to_int(const Line& line, std::size_t i) {
    const std::string& tok = line.tokens[i];
    long long value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
      throw SyntaxError(line.number, "expected an integer, found '" + tok + "'");
    }
    return value;
  }

  static double to_real(const Line& line, std::size_t i) {
    const std::string& tok = line.tokens[i];
    double value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
      throw SyntaxError(line.number, "expected a number, found '" + tok + "'");
    }
    return value;
  }

 private:
  std::vector<Line> lines_;
  std::size_t pos_ = 0;
};

void expect_count(const Line& line, std::size_t expected, const char* what) {
  if (line.tokens.size() != expected) {
    throw SyntaxError(line.number, std::string(what) + " record has " + std::to_string(line.tokens.size()) +
                                       " fields, expected " + std::to_string(expected));
  }
}

int checked_count(long long n, int line, const char* what) {
  if (n < 0 || n > 100'000'000) throw SyntaxError(line, std::string("invalid ") + what + " count");
  return static_cast<int>(n);
}

}  // namespace

Instance parse_instance(std::istream& in) {
  Reader rd(tokenize(in));
  Instance inst;

  int at = rd.line_number();
  const int R = checked_count(rd.header("RESOURCES", 1)[0], at, "resource");
  for (int i = 0; i < R; ++i) {
    const Line& line = rd.record("resource", 2);
    expect_count(line, 2, "resource");
    Resource res;
    res.id = static_cast<int>(Reader::to_int(line, 0));
    const auto t = Reader::to_int(line, 1);
    if (t != 0 && t != 1) throw SyntaxError(line.number, "transient flag must be 0 or 1");
    res.transient = t == 1;
    inst.resources.push_back(res);
  }

  at = rd.line_number();
  const auto topo = rd.header("TOPOLOGY", 2);
  inst.n_neighborhoods = checked_count(topo[0], at, "neighbourhood");
  inst.n_locations = checked_count(topo[1], at, "location");

  at = rd.line_number();
  const int M = checked_count(rd.header("MACHINES", 1)[0], at, "machine");
  const std::size_t machine_fields = 3 + 2 * static_cast<std::size_t>(R) + 3;
  for (int i = 0; i < M; ++i) {
    const Line& line = rd.record("machine", machine_fields);
    expect_count(line, machine_fields, "machine");
    Machine mc;
    mc.id = static_cast<int>(Reader::to_int(line, 0));
    mc.neighborhood = static_cast<int>(Reader::to_int(line, 1));
    mc.location = static_cast<int>(Reader::to_int(line, 2));
    std::size_t k = 3;
    for (int r = 0; r < R; ++r) mc.capacity.push_back(Reader::to_int(line, k++));
    for (int r = 0; r < R; ++r) mc.safety_capacity.push_back(Reader::to_int(line, k++));
    mc.elec_idle = Reader::to_real(line, k++);
    mc.elec_per_cpu = Reader::to_real(line, k++);
    mc.elec_price = Reader::to_real(line, k++);
    inst.machines.push_back(std::move(mc));
  }

  at = rd.line_number();
  const int S = checked_count(rd.header("SERVICES", 1)[0], at, "service");
  for (int i = 0; i < S; ++i) {
    const Line& line = rd.record("service", 3);
    Service svc;
    svc.id = static_cast<int>(Reader::to_int(line, 0));
    svc.spread_min = static_cast<int>(Reader::to_int(line, 1));
    const auto k = Reader::to_int(line, 2);
    if (k < 0) throw SyntaxError(line.number, "negative dependency count");
    expect_count(line, 3 + static_cast<std::size_t>(k), "service");
    for (long long j = 0; j < k; ++j) svc.depends_on.push_back(static_cast<int>(Reader::to_int(line, 3 + static_cast<std::size_t>(j))));
    inst.services.push_back(std::move(svc));
  }

  at = rd.line_number();
  const int V = checked_count(rd.header("VMS", 1)[0], at, "vm");
  const std::size_t vm_fields = 2 + static_cast<std::size_t>(R) + 4;
  for (int i = 0; i < V; ++i) {
    const Line& line = rd.record("vm", vm_fields);
    expect_count(line, vm_fields, "vm");
    Vm vm;
    vm.id = static_cast<int>(Reader::to_int(line, 0));
    vm.service = static_cast<int>(Reader::to_int(line, 1));
    std::size_t k = 2;
    for (int r = 0; r < R; ++r) vm.demand.push_back(Reader::to_int(line, k++));
    vm.initial_machine = static_cast<int>(Reader::to_int(line, k++));
    vm.prep_cost = Reader::to_real(line, k++);
    vm.deploy_cost = Reader::to_real(line, k++);
    vm.transfer_size = Reader::to_real(line, k++);
    inst.vms.push_back(std::move(vm));
  }

  rd.header("TRANSFER", 0);
  inst.transfer_cost.reserve(static_cast<std::size_t>(M) * static_cast<std::size_t>(M));
  for (int i = 0; i < M; ++i) {
    const Line& line = rd.record("transfer row", static_cast<std::size_t>(M));
    expect_count(line, static_cast<std::size_t>(M), "transfer row");
    for (int j = 0; j < M; ++j) inst.transfer_cost.push_back(Reader::to_real(line, static_cast<std::size_t>(j)));
  }

  inst.cpu_resource = static_cast<int>(rd.header("CPU_RESOURCE", 1)[0]);

  {
    const Line& line = rd.next("TIME_BUDGET");
    if (line.tokens.front() != "TIME_BUDGET") {
      throw SyntaxError(line.number, "expected TIME_BUDGET, found '" + line.tokens.front() + "'");
    }
    expect_count(line, 2, "TIME_BUDGET");
    inst.time_budget_s = Reader::to_real(line, 1);
  }
  if (!rd.done()) throw SyntaxError(rd.line_number(), "trailing content after TIME_BUDGET");

  inst.rebuild_members();

  auto problems = validate(inst);
  if (!problems.empty()) {
    const std::string infeasible = "infeasible initial assignment";
    if (problems.size() == 1 && problems.front().starts_with(infeasible)) throw InfeasibleInitialError(problems.front());
    std::string msg;
    for (const auto& p : problems) msg += (msg.empty() ? "" : "; ") + p;
    throw SemanticError(msg);
  }
  return inst;
}

Instance parse_instance_string(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_instance(in);
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InstanceError("cannot open instance file: " + path);
  return parse_instance(in);
}

void write_instance(std::ostream& out, const Instance& inst) {
  out << "RESOURCES " << inst.num_resources() << '\n';
  for (const auto& r : inst.resources) out << r.id << ' ' << (r.transient ? 1 : 0) << '\n';
  out << "TOPOLOGY " << inst.n_neighborhoods << ' ' << inst.n_locations << '\n';
  out << "MACHINES " << inst.num_machines() << '\n';
  for (const auto& m : inst.machines) {
    out << m.id << ' ' << m.neighborhood << ' ' << m.location;
    for (auto q : m.capacity) out << ' ' << q;
    for (auto sc : m.safety_capacity) out << ' ' << sc;
    out << ' ' << format_real(m.elec_idle) << ' ' << format_real(m.elec_per_cpu) << ' ' << format_real(m.elec_price)
        << '\n';
  }
  out << "SERVICES " << inst.num_services() << '\n';
  for (const auto& s : inst.services) {
    out << s.id << ' ' << s.spread_min << ' ' << s.depends_on.size();
    for (int d : s.depends_on) out << ' ' << d;
    out << '\n';
  }
  out << "VMS " << inst.num_vms() << '\n';
  for (const auto& v : inst.vms) {
    out << v.id << ' ' << v.service;
    for (auto d : v.demand) out << ' ' << d;
    out << ' ' << v.initial_machine << ' ' << format_real(v.prep_cost) << ' ' << format_real(v.deploy_cost) << ' '
        << format_real(v.transfer_size) << '\n';
  }
  out << "TRANSFER\n";
  for (int i = 0; i < inst.num_machines(); ++i) {
    for (int j = 0; j < inst.num_machines(); ++j) out << (j ? " " : "") << format_real(inst.transfer(i, j));
    out << '\n';
  }
  out << "CPU_RESOURCE " << inst.cpu_resource << '\n';
  out << "TIME_BUDGET " << format_real(inst.time_budget_s) << '\n';
}

std::string write_instance_string(const Instance& inst) {
  std::ostringstream out;
  write_instance(out, inst);
  return out.str();
}

}  // namespace vmr
