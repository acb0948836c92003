/* C interface of the setavg library. Every function returning sa_status
 * leaves a message for sa_last_error() on failure. Objects returned through
 * out parameters are owned by the caller and released with the matching
 * *_free function. */
#ifndef SETAVG_SETAVG_H
#define SETAVG_SETAVG_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SA_API __declspec(dllexport)
#else
#define SA_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sa_status {
  SA_OK = 0,
  SA_ERR_INVALID = 1,
  SA_ERR_CLIPPING = 2,
  SA_ERR_IO = 3,
  SA_ERR_USAGE = 4,
  SA_ERR_VERIFY = 5,
  SA_ERR_GRID = 6,
  SA_ERR_NOT_NESTED = 7,
  SA_ERR_EMPTY = 8,
  SA_ERR_INTERNAL = 9
} sa_status;

typedef struct sa_raster sa_raster;
typedef struct sa_seq sa_seq;

typedef struct sa_geometry {
  int width;
  int height; /* 1 for 1D sets */
  double cell_size;
  double origin_x; /* center of cell (0, 0) */
  double origin_y;
} sa_geometry;

typedef enum sa_scheme {
  SA_SCHEME_PIECEWISE = 0,
  SA_SCHEME_SPLINE = 1,
  SA_SCHEME_FOURPOINT = 2
} sa_scheme;

typedef enum sa_boundary { SA_BOUNDARY_OPEN = 0, SA_BOUNDARY_BIINFINITE = 1 } sa_boundary;

typedef struct sa_config {
  sa_scheme scheme;
  int degree;     /* spline degree, 2 = Chaikin */
  double tension; /* 4-point w */
  int levels;
  int connectivity; /* 4 or 8 */
  double param_bound;
  sa_boundary boundary;
} sa_config;

typedef struct sa_average_report {
  double requested_target;
  double achieved_measure;
  int clamped;
  int fallback_used;
  int extrapolated;
  size_t components;
  size_t sub_averages;
  double cell_area;
  double budget;
} sa_average_report;

typedef struct sa_seq_info {
  int level;
  double spacing;
  size_t clamped_averages;
  size_t midpoint_insertions;
  size_t warnings;
} sa_seq_info;

typedef struct sa_fixture_params {
  double x0;
  double spacing;
  int count;
  int cells; /* grid resolution */
} sa_fixture_params;

SA_API const char* sa_last_error(void);
SA_API const char* sa_status_name(sa_status status);
SA_API void sa_config_default(sa_config* config);
SA_API void sa_string_free(char* s);

/* Rasters */
SA_API sa_status sa_raster_create(const sa_geometry* geometry, sa_raster** out);
SA_API sa_status sa_raster_clone(const sa_raster* r, sa_raster** out);
SA_API void sa_raster_free(sa_raster* r);
SA_API sa_status sa_raster_geometry(const sa_raster* r, sa_geometry* out);
SA_API sa_status sa_raster_set_placement(sa_raster* r, double cell_size, double origin_x,
                                         double origin_y);
SA_API sa_status sa_raster_get(const sa_raster* r, int x, int y, int* value);
SA_API sa_status sa_raster_set(sa_raster* r, int x, int y, int value);
SA_API sa_status sa_raster_count(const sa_raster* r, size_t* count);
SA_API sa_status sa_raster_measure(const sa_raster* r, double* measure);
SA_API sa_status sa_raster_equal(const sa_raster* a, const sa_raster* b, int* equal);
SA_API sa_status sa_symdiff_distance(const sa_raster* a, const sa_raster* b, double* d);
SA_API sa_status sa_raster_pad(const sa_raster* r, int margin, sa_raster** out);
SA_API sa_status sa_raster_crop_to(const sa_raster* r, const sa_geometry* target,
                                   sa_raster** out);
/* format: "P1", "P2", "P4" or "P5" */
SA_API sa_status sa_pnm_load(const char* path, int threshold, sa_raster** out);
SA_API sa_status sa_pnm_save(const sa_raster* r, const char* path, const char* format);

/* Averages. t weights a. report may be NULL. */
SA_API sa_status sa_average(const sa_raster* a, const sa_raster* b, double t,
                            const sa_config* config, sa_raster** out, sa_average_report* report);
SA_API sa_status sa_extrapolation_margin(const sa_raster* a, const sa_raster* b, double t,
                                         int* margin);

/* Sequences of sets at first_position + i * spacing. */
SA_API sa_status sa_seq_create(double first_position, double spacing, sa_seq** out);
SA_API void sa_seq_free(sa_seq* s);
SA_API sa_status sa_seq_push(sa_seq* s, const sa_raster* r);
SA_API size_t sa_seq_size(const sa_seq* s);
SA_API sa_status sa_seq_get(const sa_seq* s, size_t i, sa_raster** out);
SA_API sa_status sa_seq_position(const sa_seq* s, size_t i, double* position);
SA_API sa_status sa_seq_info_get(const sa_seq* s, sa_seq_info* info);
SA_API const char* sa_seq_warning(const sa_seq* s, size_t i);
SA_API sa_status sa_seq_max_distance(const sa_seq* s, double* d);

SA_API sa_status sa_subdivide(const sa_seq* in, const sa_config* config, sa_seq** out);
/* levels must hold config->levels + 1 entries; levels[0] is a copy of in. */
SA_API sa_status sa_subdivide_history(const sa_seq* in, const sa_config* config,
                                      sa_seq** levels);
SA_API sa_status sa_interpolate(const sa_seq* in, int count, const sa_config* config,
                                sa_seq** out);
SA_API sa_status sa_eval(const sa_seq* in, double x, const sa_config* config, sa_raster** out);

/* pattern holds one printf integer conversion, e.g. "slice_%03d.pgm".
 * count < 0 loads until the first missing index. */
SA_API sa_status sa_stack_load(const char* pattern, int threshold, int first, int count,
                               sa_seq** out);

SA_API sa_status sa_fixture_defaults(const char* name, sa_fixture_params* params);
/* params may be NULL for the defaults. */
SA_API sa_status sa_fixture(const char* name, const sa_fixture_params* params, sa_seq** out);

/* Runs the verification suite. *json receives the report (free with
 * sa_string_free). Returns SA_ERR_VERIFY when a property fails. */
SA_API sa_status sa_verify(uint64_t seed, int size, int trials, int inject_fault, char** json);

#ifdef __cplusplus
}
#endif

#endif
