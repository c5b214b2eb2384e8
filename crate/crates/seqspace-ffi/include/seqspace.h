/* C ABI for the seqspace toolkit.
 *
 * Handles are opaque; release them with the matching _free function.
 * Fallible calls return an SQS_* status and write results through
 * out-pointers. Strings returned through out-pointers are owned by the
 * caller and must be released with sqs_string_free. No call unwinds.
 */

#ifndef SEQSPACE_H
#define SEQSPACE_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define SQS_OK 0
#define SQS_ERR_PARSE 1
#define SQS_ERR_DOMAIN 2
#define SQS_ERR_NULL 3
#define SQS_ERR_UTF8 4
#define SQS_ERR_PANIC 5

#define SQS_STATUS_MEMBER 0
#define SQS_STATUS_NON_MEMBER 1
#define SQS_STATUS_INCONCLUSIVE 2

typedef struct SqsSeq SqsSeq;
typedef struct SqsVerdict SqsVerdict;

/* Library version as a static string; do not free. */
const char *sqs_version(void);

/* Sequence literals: finite:[p/q,...], const:c, powerlaw:c,p, geom:c,r,
 * alt:c. Rationals are written p/q in lowest terms. */
int sqs_seq_parse(const char *literal, SqsSeq **out);
void sqs_seq_free(SqsSeq *seq);

/* The k-th term (1-based) as a rational string. */
int sqs_seq_term(const SqsSeq *seq, uint64_t k, char **out);

void sqs_string_free(char *s);

/* Exact norm of a sequence in a space (spaces: l1, linf, c, c0, bv, bs,
 * cs, c0s, optionally prefixed int_ or d_). */
int sqs_norm(const char *space, const SqsSeq *seq, char **out);

/* Membership verdict for a sequence in a space. */
int sqs_member(const char *space, const SqsSeq *seq, uint64_t probe,
               SqsVerdict **out);

/* Dual membership; kind is alpha, beta, or gamma. */
int sqs_dual_member(const char *space, const char *kind, const SqsSeq *seq,
                    uint64_t probe, SqsVerdict **out);

/* Matrix class membership between undecorated spaces. Matrices use the
 * triangle grammar (delta, gamma, sigma, identity, diag:..., prod:a,b,
 * closed:gamma_inv, closed:sigma_inv) or zero. */
int sqs_classify(const char *matrix, const char *from, const char *to,
                 uint64_t probe, SqsVerdict **out);

/* Matrix class membership for a class with a decorated bv side, written
 * from:to (for example int_bv:linf). */
int sqs_reduce(const char *matrix, const char *cls, uint64_t probe,
               SqsVerdict **out);

/* Verdict accessors. Status returns SQS_STATUS_*; value writes NULL when
 * the verdict carries no exact rational value. */
int sqs_verdict_status(const SqsVerdict *v);
int sqs_verdict_value(const SqsVerdict *v, char **out);
int sqs_verdict_certificate(const SqsVerdict *v, char **out);
void sqs_verdict_free(SqsVerdict *v);

#ifdef __cplusplus
}
#endif

#endif /* SEQSPACE_H */
