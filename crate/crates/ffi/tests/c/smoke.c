#include <stdio.h>
#include <string.h>
#include "weitz.h"

#define CHECK(call)                                                            \
  do {                                                                         \
    WeitzStatus s_ = (call);                                                   \
    if (s_ != WEITZ_STATUS_OK) {                                               \
      fprintf(stderr, "%s -> %d: %s\n", #call, (int)s_, weitz_last_error());   \
      return 1;                                                                \
    }                                                                          \
  } while (0)

int main(void) {
  WeitzCurvature *sphere = NULL;
  WeitzRep *spin = NULL;
  CHECK(weitz_curvature_load("sphere", 4, &sphere));
  CHECK(weitz_rep_new(4, "spin", &spin));

  size_t len = 0;
  double values[8];
  CHECK(weitz_k_spectrum(sphere, spin, values, 8, &len));
  /* K = -s/16 on spinors of the round sphere, s = 24 here */
  for (size_t i = 0; i < len; i++) {
    if (values[i] > -1.5 + 1e-12 || values[i] < -1.5 - 1e-12) {
      fprintf(stderr, "eigenvalue %zu = %g\n", i, values[i]);
      return 1;
    }
  }

  WeitzRep *bad = NULL;
  if (weitz_rep_new(5, "spin+", &bad) != WEITZ_STATUS_INVALID_ARGUMENT || bad != NULL) return 1;
  if (weitz_last_error() == NULL) return 1;

  const char *argv[] = {"check", "strange", "--algebra", "A1"};
  char *text = NULL;
  int exit_code = -1;
  CHECK(weitz_execute(4, argv, &text, &exit_code));
  if (exit_code != 0 || strstr(text, "1/8") == NULL) return 1;
  weitz_string_free(text);

  weitz_rep_free(spin);
  weitz_curvature_free(sphere);
  printf("ok %zu %s\n", len, weitz_version());
  return 0;
}
