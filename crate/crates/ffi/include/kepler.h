#ifndef KEPLER_H
#define KEPLER_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum KeplerStatus {
  KEPLER_STATUS_OK = 0,
  KEPLER_STATUS_NULL_POINTER = 1,
  KEPLER_STATUS_DOMAIN = 2,
  KEPLER_STATUS_DEGENERATE_CURVATURE = 3,
  KEPLER_STATUS_SINGULARITY = 4,
  KEPLER_STATUS_DEGENERATE_ORBIT = 5,
  KEPLER_STATUS_UNBOUND_ORBIT = 6,
  KEPLER_STATUS_POLE = 7,
  KEPLER_STATUS_OUT_OF_RANGE = 8,
  KEPLER_STATUS_IO = 9,
  KEPLER_STATUS_PANIC = 10,
} KeplerStatus;

// Opaque time-law handle.
typedef struct KeplerTimeLaw KeplerTimeLaw;

// Opaque trajectory handle.
typedef struct KeplerTrajectory KeplerTrajectory;

typedef struct KeplerEllipse {
  double a;
  double b;
  double f;
  double eps;
  double p;
} KeplerEllipse;

typedef struct KeplerVec2 {
  double x;
  double y;
} KeplerVec2;

typedef struct KeplerVec3 {
  double x;
  double y;
  double z;
} KeplerVec3;

typedef struct KeplerState {
  struct KeplerVec3 pos;
  struct KeplerVec3 vel;
  double t;
} KeplerState;

// Plane constants `(A, B, C)`, energy `h` and `mu` of one state.
typedef struct KeplerFirstIntegrals {
  struct KeplerVec3 angular;
  double energy;
  double mu;
} KeplerFirstIntegrals;

// Conic elements; `sense` is +1 for counter-clockwise, -1 for clockwise
// motion about `normal`.
typedef struct KeplerElements {
  double p;
  double eps;
  double phase;
  double mu;
  double areal;
  double energy;
  int32_t sense;
  struct KeplerVec3 normal;
} KeplerElements;

typedef struct KeplerPlanet {
  // NUL-terminated, static lifetime.
  const char *name;
  double eps;
} KeplerPlanet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Static name of a status code.
const char *kepler_status_name(enum KeplerStatus status);

// Copies the calling thread's last error message into `buf` (NUL-terminated,
// truncated to `len`). Returns the full message length including the NUL, or
// 0 when no error has been recorded.
uintptr_t kepler_last_error_message(char *buf, uintptr_t len);

enum KeplerStatus kepler_ellipse_from_axes(double a, double b, struct KeplerEllipse *out);

enum KeplerStatus kepler_ellipse_from_conic(double p, double eps, struct KeplerEllipse *out);

double kepler_polar_radius(double p, double eps, double theta);

double kepler_cross_z(struct KeplerVec2 u, struct KeplerVec2 v);

struct KeplerVec3 kepler_cross3(struct KeplerVec3 u, struct KeplerVec3 v);

enum KeplerStatus kepler_curvature_radius(struct KeplerVec2 v, struct KeplerVec2 acc, double *out);

enum KeplerStatus kepler_gravity_accel(struct KeplerVec3 pos, double mu, struct KeplerVec3 *out);

enum KeplerStatus kepler_first_integrals(const struct KeplerState *state,
                                         double mu,
                                         struct KeplerFirstIntegrals *out);

enum KeplerStatus kepler_elements_from_state(const struct KeplerState *state,
                                             double mu,
                                             struct KeplerElements *out);

enum KeplerStatus kepler_period(const struct KeplerElements *elements, double *out);

// Integrates `steps` RK4 steps; on success `*out` owns a new trajectory.
enum KeplerStatus kepler_propagate(const struct KeplerState *state,
                                   double mu,
                                   double dt,
                                   uintptr_t steps,
                                   struct KeplerTrajectory **out);

uintptr_t kepler_trajectory_len(const struct KeplerTrajectory *traj);

enum KeplerStatus kepler_trajectory_state(const struct KeplerTrajectory *traj,
                                          uintptr_t index,
                                          struct KeplerState *out);

// Worst relative drift of `(A, B, C, h)` along the trajectory, written to `out[0..4]`.
enum KeplerStatus kepler_trajectory_max_drift(const struct KeplerTrajectory *traj, double *out);

// Plane residual of the trajectory against the plane of its first state.
enum KeplerStatus kepler_trajectory_plane_residual(const struct KeplerTrajectory *traj,
                                                   double *out);

// Writes the trajectory CSV (`t,x,y,z,vx,vy,vz,A,B,C,h`) to `path`.
enum KeplerStatus kepler_trajectory_write_csv(const struct KeplerTrajectory *traj,
                                              const char *path);

void kepler_trajectory_free(struct KeplerTrajectory *traj);

double kepler_theta_density(double theta, double eps);

// Continuous time-law integral `I(theta)`; NaN when `eps` is outside `[0, 1)`.
double kepler_antiderivative(double theta, double eps);

enum KeplerStatus kepler_antiderivative_raw(double theta, double eps, double *out);

double kepler_quadrature(double theta, double eps);

enum KeplerStatus kepler_time_law_new(double eps, double rate, struct KeplerTimeLaw **out);

enum KeplerStatus kepler_time_law_from_elements(const struct KeplerElements *elements,
                                                struct KeplerTimeLaw **out);

// Returns NaN for a null handle.
double kepler_time_law_period(const struct KeplerTimeLaw *law);

// Returns NaN for a null handle.
double kepler_time_from_angle(const struct KeplerTimeLaw *law, double theta);

// Returns NaN for a null handle.
double kepler_angle_from_time(const struct KeplerTimeLaw *law, double t);

void kepler_time_law_free(struct KeplerTimeLaw *law);

enum KeplerStatus kepler_speed_from_angle(double theta, double eps, double scale, double *out);

uintptr_t kepler_planet_count(void);

enum KeplerStatus kepler_planet(uintptr_t index, struct KeplerPlanet *out);

enum KeplerStatus kepler_planet_speed_ratio(uintptr_t index, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KEPLER_H */
