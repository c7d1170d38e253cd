#include "sph/sph.h"

#include <charconv>
#include <cstring>
#include <sstream>

#include "json.hpp"

#include "bench.hpp"
#include "interp.hpp"
#include "parser.hpp"
#include "printer.hpp"
#include "transform.hpp"
#include "typecheck.hpp"
#include "value_io.hpp"

using namespace sph;
using namespace sph::dsl;

struct sph_program {
  Program prog;
};

struct sph_value {
  Value val;
};

namespace {

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void set_error(char** error_out, const std::string& msg) {
  if (error_out) *error_out = dup_string(msg);
}

sph_status status_of(const error& e) {
  switch (e.kind()) {
    case errc::parse:
    case errc::decl:
      return SPH_ERR_PARSE;
    case errc::transform:
      return SPH_ERR_TRANSFORM;
    default:
      return SPH_ERR_RUNTIME;
  }
}

template <typename Fn>
sph_status guarded(char** error_out, Fn&& fn) {
  try {
    return fn();
  } catch (const error& e) {
    set_error(error_out, std::string(errc_name(e.kind())) + " error: " + e.what());
    return status_of(e);
  } catch (const std::exception& e) {
    set_error(error_out, e.what());
    return SPH_ERR_RUNTIME;
  }
}

}  // namespace

extern "C" {

const char* sph_version(void) { return "1.0.0"; }

void sph_string_free(char* s) { delete[] s; }

sph_status sph_parse(const char* source, sph_program** program_out,
                     char** error_out) {
  if (!source || !program_out) {
    set_error(error_out, "null argument");
    return SPH_ERR_USAGE;
  }
  return guarded(error_out, [&] {
    auto* p = new sph_program{parse(source)};
    collect_signatures(p->prog);  // validate declarations and typing up front
    *program_out = p;
    return SPH_OK;
  });
}

void sph_program_free(sph_program* p) { delete p; }

sph_status sph_pretty_print(const sph_program* p, char** text_out,
                            char** error_out) {
  if (!p || !text_out) {
    set_error(error_out, "null argument");
    return SPH_ERR_USAGE;
  }
  return guarded(error_out, [&] {
    *text_out = dup_string(pretty_print(p->prog));
    return SPH_OK;
  });
}

sph_status sph_transform(const sph_program* p, sph_program** program_out,
                         char** report_json_out, int* warning_count_out,
                         char** error_out) {
  if (!p || !program_out) {
    set_error(error_out, "null argument");
    return SPH_ERR_USAGE;
  }
  return guarded(error_out, [&] {
    TransformResult res = transform_program(p->prog);
    *program_out = new sph_program{std::move(res.program)};
    if (report_json_out) *report_json_out = dup_string(res.report.to_json());
    if (warning_count_out)
      *warning_count_out = static_cast<int>(res.report.warnings.size());
    return SPH_OK;
  });
}

sph_status sph_wrappers(const sph_program* p, sph_program** program_out,
                        char** error_out) {
  if (!p || !program_out) {
    set_error(error_out, "null argument");
    return SPH_ERR_USAGE;
  }
  return guarded(error_out, [&] {
    SignatureTable sigs = collect_signatures(p->prog);
    *program_out = new sph_program{generate_wrappers(sigs)};
    return SPH_OK;
  });
}

sph_status sph_value_parse(const char* text, sph_value** value_out,
                           char** error_out) {
  if (!text || !value_out) {
    set_error(error_out, "null argument");
    return SPH_ERR_USAGE;
  }
  return guarded(error_out, [&] {
    *value_out = new sph_value{parse_value(text)};
    return SPH_OK;
  });
}

void sph_value_free(sph_value* v) { delete v; }

sph_status sph_value_format(const sph_value* v, char** text_out,
                            char** error_out) {
  if (!v || !text_out) {
    set_error(error_out, "null argument");
    return SPH_ERR_USAGE;
  }
  return guarded(error_out, [&] {
    *text_out = dup_string(format_value(v->val));
    return SPH_OK;
  });
}

sph_status sph_value_diff(const sph_value* a, const sph_value* b,
                          char** description_out) {
  if (!a || !b) {
    set_error(description_out, "null argument");
    return SPH_ERR_USAGE;
  }
  return guarded(description_out, [&]() -> sph_status {
    if (auto d = diff_values(a->val, b->val)) {
      if (description_out) *description_out = dup_string(*d);
      return SPH_ERR_DIFF;
    }
    return SPH_OK;
  });
}

sph_status sph_interpret(const sph_program* p, const char* proc_name,
                         const char* const* input_names,
                         const sph_value* const* input_values, int input_count,
                         char*** output_names_out, sph_value*** output_values_out,
                         int* output_count_out, char** alloc_json_out,
                         char** error_out) {
  if (!p || !proc_name || !output_names_out || !output_values_out ||
      !output_count_out || (input_count > 0 && (!input_names || !input_values))) {
    set_error(error_out, "null argument");
    return SPH_ERR_USAGE;
  }
  return guarded(error_out, [&] {
    std::map<std::string, Value> inputs;
    for (int i = 0; i < input_count; ++i)
      inputs[input_names[i]] = input_values[i]->val;

    InterpResult res = interpret(p->prog, proc_name, std::move(inputs));

    int n = static_cast<int>(res.outputs.size());
    char** names = new char*[n];
    sph_value** values = new sph_value*[n];
    int i = 0;
    for (auto& [name, val] : res.outputs) {
      names[i] = dup_string(name);
      values[i] = new sph_value{std::move(val)};
      ++i;
    }
    *output_names_out = names;
    *output_values_out = values;
    *output_count_out = n;

    if (alloc_json_out) {
      nlohmann::json j;
      j["meshes_created"] = res.allocs.meshes_created;
      j["meshes_copied"] = res.allocs.meshes_copied;
      j["elements_written"] = res.allocs.elements_written;
      *alloc_json_out = dup_string(j.dump(2));
    }
    return SPH_OK;
  });
}

void sph_outputs_free(char** names, sph_value** values, int count) {
  for (int i = 0; i < count; ++i) {
    delete[] names[i];
    delete values[i];
  }
  delete[] names;
  delete[] values;
}

sph_status sph_bench(const char* sizes_csv, uint64_t total_updates,
                     int repetitions, int use_double, uint64_t seed,
                     char** table_out, char** json_out, char** error_out) {
  return guarded(error_out, [&]() -> sph_status {
    BenchConfig cfg;
    if (sizes_csv && *sizes_csv) {
      cfg.sizes.clear();
      std::istringstream is(sizes_csv);
      std::string tok;
      while (std::getline(is, tok, ',')) {
        unsigned long v = 0;
        auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc{} || p != tok.data() + tok.size() || v == 0) {
          set_error(error_out, "malformed size list '" + std::string(sizes_csv) + "'");
          return SPH_ERR_USAGE;
        }
        cfg.sizes.push_back(v);
      }
      if (cfg.sizes.empty()) {
        set_error(error_out, "empty size list");
        return SPH_ERR_USAGE;
      }
    }
    if (total_updates) cfg.total_updates = total_updates;
    if (repetitions) cfg.repetitions = repetitions;
    cfg.use_double = use_double != 0;
    if (seed) cfg.seed = seed;

    BenchReport rep = run_bench(cfg);
    if (table_out) *table_out = dup_string(rep.table());
    if (json_out) *json_out = dup_string(rep.to_json());
    return SPH_OK;
  });
}

}  // extern "C"
