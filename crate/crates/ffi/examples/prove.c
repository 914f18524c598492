#include <stdio.h>
#include "sds.h"

int main(void) {
    SdsForm *f = NULL;
    SdsCertificate *cert = NULL;
    char *text = NULL;
    bool valid = false;

    if (sds_form_parse("2 2\n1 2 0\n-1 1 1\n1 0 2\n", &f) != SDS_STATUS_OK) {
        fprintf(stderr, "%s\n", sds_last_error());
        return 1;
    }
    if (sds_prove(f, SDS_GOAL_PROVE_STRICT_POSITIVE, 4, 1, &cert) != SDS_STATUS_OK) {
        fprintf(stderr, "%s\n", sds_last_error());
        return 1;
    }
    sds_certificate_text(cert, &text);
    sds_certificate_replay(f, cert, &valid);
    printf("%sreplay: %s\n", text, valid ? "valid" : "invalid");

    sds_string_free(text);
    sds_certificate_free(cert);
    sds_form_free(f);
    return valid ? 0 : 1;
}
