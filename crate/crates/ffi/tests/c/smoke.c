#include <math.h>
#include <stdio.h>
#include <string.h>

#include "pinwords.h"

#define CHECK(expr)                                                         \
    do {                                                                    \
        if (!(expr)) {                                                      \
            const char *msg = pw_last_error_message();                      \
            fprintf(stderr, "%s:%d: %s (%s)\n", __FILE__, __LINE__, #expr, \
                    msg ? msg : "no error message");                        \
            return 1;                                                       \
        }                                                                   \
    } while (0)

int main(void) {
    static const char dic[] = "5\nlion\nmail/S\nblue\nclear\nmnemonic\n";
    PwDictionary *dict = NULL;
    PwMap *standard = NULL;
    PwMap *stretched = NULL;
    PwDistribution *dist = NULL;
    PwModel *model = NULL;
    PwLexicon *lex = NULL;
    char *s = NULL;
    double h = 0.0;

    CHECK(pw_dictionary_load((const uint8_t *)dic, strlen(dic), NULL, "en",
                             PW_WORD_MODEL_SOURCE_FORM, &dict) == PW_STATUS_OK);
    CHECK(pw_dictionary_word_count(dict) == 5);
    CHECK(pw_map_builtin("standard", &standard) == PW_STATUS_OK);
    CHECK(pw_map_builtin("stretched", &stretched) == PW_STATUS_OK);

    CHECK(pw_map_word_to_pin(standard, "lion", &s) == PW_STATUS_OK);
    CHECK(strcmp(s, "5466") == 0);
    pw_string_free(s);

    const PwDictionary *dicts[] = {dict};
    CHECK(pw_distribution_generate(PW_METHOD_EXACT, 4, standard, dicts, 1, &dist) == PW_STATUS_OK);
    CHECK(pw_distribution_total(dist) == 3);
    CHECK(pw_distribution_count(dist, "2583") == 1);
    CHECK(pw_distribution_entropy(dist, &h) == PW_STATUS_OK);
    CHECK(fabs(h - log2(3.0)) < 1e-9);

    CHECK(pw_model_train(dicts, 1, stretched, &model) == PW_STATUS_OK);
    bool smoothed = true;
    CHECK(pw_model_viterbi(model, "5476", &s, NULL, &smoothed) == PW_STATUS_OK);
    CHECK(strcmp(s, "lion") == 0 && !smoothed);
    pw_string_free(s);

    CHECK(pw_lexicon_load(NULL, stretched, &lex) == PW_STATUS_OK);
    CHECK(pw_pin_to_phrase(lex, "27354", NULL, 42, &s) == PW_STATUS_OK);
    char *pin = NULL;
    CHECK(pw_phrase_to_pin(s, stretched, &pin) == PW_STATUS_OK);
    CHECK(strcmp(pin, "27354") == 0);
    pw_string_free(pin);
    pw_string_free(s);

    CHECK(pw_random_pin(1, 0, &s) == PW_STATUS_INVALID_ARGUMENT);
    CHECK(pw_last_error_message() != NULL);

    pw_lexicon_free(lex);
    pw_model_free(model);
    pw_distribution_free(dist);
    pw_map_free(stretched);
    pw_map_free(standard);
    pw_dictionary_free(dict);
    printf("ok %s\n", pw_version());
    return 0;
}
