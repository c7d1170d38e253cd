// Command-line front end over the C API: transform, wrappers, run,
// diff, bench.
//
// Exit codes: 0 ok, 1 usage, 2 parse error, 3 transform error,
// 4 runtime error, 5 diff mismatch, 6 transformed with warnings.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "sph/sph.h"

namespace {

constexpr int kExitWarnings = 6;

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw CLI::ValidationError("cannot open '" + path + "'");
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw CLI::ValidationError("cannot write '" + path + "'");
  f << text;
}

/// Owns a library-allocated string.
struct LibString {
  char* s = nullptr;
  ~LibString() { sph_string_free(s); }
  std::string str() const { return s ? s : ""; }
};

int fail(const LibString& err, sph_status st) {
  std::cerr << "error: " << (err.s ? err.s : "unknown failure") << "\n";
  return static_cast<int>(st);
}

struct ProgramHandle {
  sph_program* p = nullptr;
  ~ProgramHandle() { sph_program_free(p); }
};

struct ValueHandle {
  sph_value* v = nullptr;
  ValueHandle() = default;
  ValueHandle(ValueHandle&& o) noexcept : v(o.v) { o.v = nullptr; }
  ValueHandle& operator=(ValueHandle&& o) noexcept {
    std::swap(v, o.v);
    return *this;
  }
  ValueHandle(const ValueHandle&) = delete;
  ValueHandle& operator=(const ValueHandle&) = delete;
  ~ValueHandle() { sph_value_free(v); }
};

int load_program(const std::string& path, ProgramHandle& out) {
  LibString err;
  sph_status st = sph_parse(read_file(path).c_str(), &out.p, &err.s);
  if (st != SPH_OK) return fail(err, st);
  return 0;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty())
    std::cout << text;
  else
    write_file(out_path, text);
}

int cmd_transform(const std::string& input, const std::string& output,
                  const std::string& report_path) {
  ProgramHandle in;
  if (int rc = load_program(input, in)) return rc;

  ProgramHandle out;
  LibString report, err;
  int warnings = 0;
  sph_status st = sph_transform(in.p, &out.p, &report.s, &warnings, &err.s);
  if (st != SPH_OK) return fail(err, st);

  LibString text;
  st = sph_pretty_print(out.p, &text.s, &err.s);
  if (st != SPH_OK) return fail(err, st);
  emit(text.str(), output);
  if (!report_path.empty()) write_file(report_path, report.str());
  if (warnings > 0) {
    std::cerr << "transformed with " << warnings << " warning(s); see the report\n";
    return kExitWarnings;
  }
  return 0;
}

int cmd_wrappers(const std::string& input, const std::string& output) {
  ProgramHandle in;
  if (int rc = load_program(input, in)) return rc;

  ProgramHandle out;
  LibString err;
  sph_status st = sph_wrappers(in.p, &out.p, &err.s);
  if (st != SPH_OK) return fail(err, st);

  LibString text;
  st = sph_pretty_print(out.p, &text.s, &err.s);
  if (st != SPH_OK) return fail(err, st);
  emit(text.str(), output);
  return 0;
}

int cmd_run(const std::string& input, const std::string& proc,
            const std::vector<std::string>& bindings, const std::string& out_dir,
            const std::string& alloc_path) {
  ProgramHandle prog;
  if (int rc = load_program(input, prog)) return rc;

  std::vector<std::string> names;
  std::vector<ValueHandle> values;
  for (const auto& b : bindings) {
    auto eq = b.find('=');
    if (eq == std::string::npos) {
      std::cerr << "error: input binding '" << b << "' is not name=file\n";
      return 1;
    }
    names.push_back(b.substr(0, eq));
    LibString err;
    ValueHandle v;
    sph_status st = sph_value_parse(read_file(b.substr(eq + 1)).c_str(), &v.v, &err.s);
    if (st != SPH_OK) return fail(err, st);
    values.push_back(std::move(v));
  }

  std::vector<const char*> name_ptrs;
  std::vector<const sph_value*> value_ptrs;
  for (std::size_t i = 0; i < names.size(); ++i) {
    name_ptrs.push_back(names[i].c_str());
    value_ptrs.push_back(values[i].v);
  }

  char** out_names = nullptr;
  sph_value** out_values = nullptr;
  int out_count = 0;
  LibString alloc_json, err;
  sph_status st = sph_interpret(prog.p, proc.c_str(), name_ptrs.data(),
                                value_ptrs.data(), static_cast<int>(names.size()),
                                &out_names, &out_values, &out_count, &alloc_json.s,
                                &err.s);
  if (st != SPH_OK) return fail(err, st);

  int rc = 0;
  for (int i = 0; i < out_count; ++i) {
    LibString text, ferr;
    if (sph_value_format(out_values[i], &text.s, &ferr.s) != SPH_OK) {
      std::cerr << "error: " << ferr.str() << "\n";
      rc = 4;
      break;
    }
    if (out_dir.empty()) {
      std::cout << "-- " << out_names[i] << "\n" << text.str();
    } else {
      write_file(out_dir + "/" + out_names[i] + ".val", text.str());
    }
  }
  sph_outputs_free(out_names, out_values, out_count);
  if (!alloc_path.empty()) write_file(alloc_path, alloc_json.str());
  return rc;
}

int cmd_diff(const std::string& a_path, const std::string& b_path) {
  LibString err;
  ValueHandle a, b;
  sph_status st = sph_value_parse(read_file(a_path).c_str(), &a.v, &err.s);
  if (st != SPH_OK) return fail(err, st);
  st = sph_value_parse(read_file(b_path).c_str(), &b.v, &err.s);
  if (st != SPH_OK) return fail(err, st);

  LibString desc;
  st = sph_value_diff(a.v, b.v, &desc.s);
  if (st == SPH_OK) {
    std::cout << "values are bitwise identical\n";
    return 0;
  }
  std::cout << desc.str() << "\n";
  return static_cast<int>(st);
}

int cmd_bench(const std::string& sizes, std::uint64_t updates, int reps,
              bool use_double, std::uint64_t seed, const std::string& json_path) {
  // SPH_PRECISION pins the element type regardless of flags.
  if (const char* env = std::getenv("SPH_PRECISION")) {
    std::string p = env;
    if (p == "double")
      use_double = true;
    else if (p == "float")
      use_double = false;
    else {
      std::cerr << "error: SPH_PRECISION must be 'float' or 'double'\n";
      return 1;
    }
  }
  LibString table, json, err;
  sph_status st = sph_bench(sizes.c_str(), updates, reps, use_double ? 1 : 0, seed,
                            &table.s, &json.s, &err.s);
  if (st != SPH_OK) return fail(err, st);
  std::cout << table.str();
  if (!json_path.empty()) write_file(json_path, json.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"source-to-source optimizer and runtime for periodic-mesh programs"};
  app.require_subcommand(1);

  std::string input, output, report_path, proc, out_dir, alloc_path;
  std::vector<std::string> bindings;
  std::string a_path, b_path;
  std::string sizes = "8,64";
  std::uint64_t updates = 0, seed = 0;
  int reps = 0;
  bool use_double = false;
  std::string json_path;

  auto* t = app.add_subcommand("transform", "rewrite assignments to self-mutating form");
  t->add_option("input", input, "program file")->required();
  t->add_option("-o,--output", output, "write the result here instead of stdout");
  t->add_option("--report", report_path, "write the rule-application report (JSON)");

  auto* w = app.add_subcommand("wrappers", "generate pure wrapper procedures");
  w->add_option("input", input, "program file")->required();
  w->add_option("-o,--output", output, "write the result here instead of stdout");

  auto* r = app.add_subcommand("run", "interpret a procedure against input values");
  r->add_option("input", input, "program file")->required();
  r->add_option("proc", proc, "procedure to execute")->required();
  r->add_option("--in", bindings, "input binding name=file (repeatable)");
  r->add_option("--out-dir", out_dir, "write outputs as <name>.val files here");
  r->add_option("--alloc", alloc_path, "write the allocation report (JSON)");

  auto* d = app.add_subcommand("diff", "compare two value files bitwise");
  d->add_option("a", a_path, "first value file")->required();
  d->add_option("b", b_path, "second value file")->required();

  auto* b = app.add_subcommand("bench", "time the algebraic vs self-mutating kernel");
  b->add_option("--sizes", sizes, "cubic edge lengths, comma separated");
  b->add_option("--updates", updates, "total element updates per timed run");
  b->add_option("--reps", reps, "repetitions; the median is reported");
  b->add_flag("--double", use_double, "use double precision elements");
  b->add_option("--seed", seed, "RNG seed for the initial data");
  b->add_option("--json", json_path, "write the result table as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (t->parsed()) return cmd_transform(input, output, report_path);
    if (w->parsed()) return cmd_wrappers(input, output);
    if (r->parsed()) return cmd_run(input, proc, bindings, out_dir, alloc_path);
    if (d->parsed()) return cmd_diff(a_path, b_path);
    if (b->parsed()) return cmd_bench(sizes, updates, reps, use_double, seed, json_path);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 1;
}
