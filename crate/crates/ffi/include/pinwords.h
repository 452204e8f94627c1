#ifndef PINWORDS_H
#define PINWORDS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PwMethod {
  PW_METHOD_EXACT = 0,
  PW_METHOD_PREFIX = 1,
  PW_METHOD_SUFFIX = 2,
  PW_METHOD_POLYGLOT = 3,
  PW_METHOD_MORPH = 4,
  PW_METHOD_COMBINATION = 5,
} PwMethod;

/*
 Result codes.
 */
typedef enum PwStatus {
  PW_STATUS_OK = 0,
  PW_STATUS_NULL_POINTER = 1,
  PW_STATUS_INVALID_ARGUMENT = 2,
  PW_STATUS_INVALID_UTF8 = 3,
  PW_STATUS_PARSE_ERROR = 4,
  PW_STATUS_UNMAPPABLE = 5,
  PW_STATUS_EMPTY_RESULT = 6,
  PW_STATUS_PANIC = 99,
} PwStatus;

typedef enum PwWordModel {
  PW_WORD_MODEL_NORMALIZED = 0,
  PW_WORD_MODEL_SOURCE_FORM = 1,
} PwWordModel;

/*
 A normalized word list.
 */
typedef struct PwDictionary PwDictionary;

/*
 Counts of PINs produced by a generation method.
 */
typedef struct PwDistribution PwDistribution;

/*
 A validated phrase lexicon.
 */
typedef struct PwLexicon PwLexicon;

/*
 A letter to digit map.
 */
typedef struct PwMap PwMap;

/*
 A trained letter bigram model.
 */
typedef struct PwModel PwModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failed call on this thread, or NULL. The pointer is
 valid until the next call into the library from the same thread.
 */
const char *pw_last_error_message(void);

/*
 Library version as a static NUL-terminated string.
 */
const char *pw_version(void);

/*
 # Safety
 `s` must be NULL or a string returned by this library and not yet freed.
 */
void pw_string_free(char *s);

/*
 Parses a hunspell `.dic` buffer.

 `encoding` may be NULL for UTF-8. `language_tag` selects language-specific
 normalization (possessive stripping for `en`).

 # Safety
 `bytes` must point to `len` readable bytes; string arguments must be NULL
 or NUL-terminated; `out` must be writable.
 */
enum PwStatus pw_dictionary_load(const uint8_t *bytes,
                                 size_t len,
                                 const char *encoding,
                                 const char *language_tag,
                                 enum PwWordModel word_model,
                                 struct PwDictionary **out);

/*
 Number of distinct normalized words.

 # Safety
 `dict` must be a live handle or NULL (which yields 0).
 */
size_t pw_dictionary_word_count(const struct PwDictionary *dict);

/*
 Number of words that contribute to PIN counts.

 # Safety
 `dict` must be a live handle or NULL (which yields 0).
 */
size_t pw_dictionary_pin_word_count(const struct PwDictionary *dict);

/*
 # Safety
 `dict` must be NULL or a handle from this library, not yet freed.
 */
void pw_dictionary_free(struct PwDictionary *dict);

/*
 Looks up `standard`, `extended` or `stretched`.

 # Safety
 `name` must be NUL-terminated; `out` must be writable.
 */
enum PwStatus pw_map_builtin(const char *name, struct PwMap **out);

/*
 Parses a map from `digit: letters` lines.

 # Safety
 `name` and `text` must be NUL-terminated; `out` must be writable.
 */
enum PwStatus pw_map_parse(const char *name, const char *text, struct PwMap **out);

/*
 Translates a lowercase word; the PIN string is written to `out_pin`.

 # Safety
 `map` must be a live handle, `word` NUL-terminated, `out_pin` writable.
 */
enum PwStatus pw_map_word_to_pin(const struct PwMap *map, const char *word, char **out_pin);

/*
 # Safety
 `map` must be NULL or a handle from this library, not yet freed.
 */
void pw_map_free(struct PwMap *map);

/*
 Runs a generation method over `count` dictionaries.

 # Safety
 `dicts` must point to `count` live dictionary handles; `map` must be a
 live handle; `out` must be writable.
 */
enum PwStatus pw_distribution_generate(enum PwMethod method,
                                       size_t pin_length,
                                       const struct PwMap *map,
                                       const struct PwDictionary *const *dicts,
                                       size_t count,
                                       struct PwDistribution **out);

/*
 Sum of all PIN counts.

 # Safety
 `dist` must be a live handle or NULL (which yields 0).
 */
uint64_t pw_distribution_total(const struct PwDistribution *dist);

/*
 Number of distinct PINs.

 # Safety
 `dist` must be a live handle or NULL (which yields 0).
 */
size_t pw_distribution_distinct(const struct PwDistribution *dist);

/*
 Count for one PIN (0 when absent or invalid).

 # Safety
 `dist` must be a live handle; `pin` must be NUL-terminated.
 */
uint64_t pw_distribution_count(const struct PwDistribution *dist, const char *pin);

/*
 Fraction of the 10^n PIN space that is covered.

 # Safety
 `dist` must be a live handle or NULL (which yields 0).
 */
double pw_distribution_coverage(const struct PwDistribution *dist);

/*
 Shannon entropy in bits. Fails with `EmptyResult` for an empty
 distribution.

 # Safety
 `dist` must be a live handle; `out` must be writable.
 */
enum PwStatus pw_distribution_entropy(const struct PwDistribution *dist, double *out);

/*
 Serializes the distribution as JSON.

 # Safety
 `dist` must be a live handle; `out_json` must be writable.
 */
enum PwStatus pw_distribution_to_json(const struct PwDistribution *dist, char **out_json);

/*
 # Safety
 `dist` must be NULL or a handle from this library, not yet freed.
 */
void pw_distribution_free(struct PwDistribution *dist);

/*
 Trains a bigram model on the union of `count` dictionaries.

 # Safety
 `dicts` must point to `count` live dictionary handles; `map` must be a
 live handle; `out` must be writable.
 */
enum PwStatus pw_model_train(const struct PwDictionary *const *dicts,
                             size_t count,
                             const struct PwMap *map,
                             struct PwModel **out);

/*
 Loads a model saved with [`pw_model_to_json`].

 # Safety
 `json` must be NUL-terminated; `out` must be writable.
 */
enum PwStatus pw_model_from_json(const char *json, struct PwModel **out);

/*
 # Safety
 `model` must be a live handle; `out_json` must be writable.
 */
enum PwStatus pw_model_to_json(const struct PwModel *model, char **out_json);

/*
 Most probable word for `pin`. `out_log_probability` receives the natural
 log probability, or negative infinity when `out_smoothed` is set. Either
 of those two out-pointers may be NULL.

 # Safety
 `model` must be a live handle, `pin` NUL-terminated, `out_word` writable.
 */
enum PwStatus pw_model_viterbi(const struct PwModel *model,
                               const char *pin,
                               char **out_word,
                               double *out_log_probability,
                               bool *out_smoothed);

/*
 # Safety
 `model` must be NULL or a handle from this library, not yet freed.
 */
void pw_model_free(struct PwModel *model);

/*
 Loads a lexicon. A NULL `json` selects the bundled English lexicon, which
 requires the stretched map.

 # Safety
 `json` must be NULL or NUL-terminated; `map` must be a live handle;
 `out` must be writable.
 */
enum PwStatus pw_lexicon_load(const char *json, const struct PwMap *map, struct PwLexicon **out);

/*
 Builds a phrase for `pin`, words separated by single spaces. A NULL
 `template` selects the default for the PIN length.

 # Safety
 `lexicon` must be a live handle; `pin` NUL-terminated; `template` NULL or
 NUL-terminated; `out_phrase` writable.
 */
enum PwStatus pw_pin_to_phrase(const struct PwLexicon *lexicon,
                               const char *pin,
                               const char *template_,
                               uint64_t seed,
                               char **out_phrase);

/*
 Recovers the PIN from a space-separated phrase.

 # Safety
 `phrase` must be NUL-terminated; `map` a live handle; `out_pin` writable.
 */
enum PwStatus pw_phrase_to_pin(const char *phrase, const struct PwMap *map, char **out_pin);

/*
 # Safety
 `lexicon` must be NULL or a handle from this library, not yet freed.
 */
void pw_lexicon_free(struct PwLexicon *lexicon);

/*
 Uniformly random PIN of `length` digits, deterministic for `seed`.

 # Safety
 `out_pin` must be writable.
 */
enum PwStatus pw_random_pin(size_t length, uint64_t seed, char **out_pin);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* PINWORDS_H */
