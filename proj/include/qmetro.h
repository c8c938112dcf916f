/* qmetro: continuous-variable quantum metrology engine.
 *
 * C API of the shared library. Runs are configured through opaque handles
 * with key=value overrides, executed, and read back as (x, y, yerr) rows
 * or written as CSV + JSON sidecar pairs. All functions returning int use
 * the QM_* status codes; qm_run_error() holds the last message of the
 * handle it failed on.
 */
#ifndef QMETRO_H
#define QMETRO_H

#ifdef __cplusplus
extern "C" {
#endif

#define QM_OK 0
#define QM_ERR_VALIDATION 2 /* bad subcommand, key, value or precondition */
#define QM_ERR_NUMERIC 3    /* numerical failure during evaluation */
#define QM_ERR_IO 4         /* output files could not be written */

typedef struct qm_run qm_run;

/* Library version string (static storage). */
const char* qm_version(void);

/* NULL if the subcommand is unknown; see qm_subcommand_count/name. */
qm_run* qm_run_new(const char* subcommand);
void qm_run_free(qm_run* run);

long qm_subcommand_count(void);
const char* qm_subcommand_name(long index);

/* Parameter override; validation happens at execute time. */
int qm_run_set(qm_run* run, const char* key, const char* value);

/* key=value lines; '#' starts a comment; flags set afterwards override. */
int qm_run_load_config(qm_run* run, const char* path);

/* Runs the computation. When output_base is non-NULL, writes
 * <output_base>.csv and <output_base>.meta.json. */
int qm_run_execute(qm_run* run, const char* output_base);

/* Message of the last failure on this handle ("" if none). */
const char* qm_run_error(const qm_run* run);

/* Result access after a successful execute. */
long qm_run_row_count(const qm_run* run);
int qm_run_row(const qm_run* run, long index, double* x, double* y, double* yerr);
int qm_run_note_count(const qm_run* run);
const char* qm_run_note(const qm_run* run, int index);

/* Subcommand -> reproduced-figure table. */
long qm_figure_count(void);
int qm_figure_entry(long index, const char** subcommand, const char** figure,
                    const char** description);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* QMETRO_H */
