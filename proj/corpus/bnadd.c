/*@ requires n >= 0 && n <= len_a && n <= len_b && n <= len_rr; */
int BnAdd(int* a, int* b, int* rr, int n) {
    int k = 0;
    int j = 0;
    while (k * 4 + 3 < n) {
        rr[4 * k] = a[4 * k] + b[4 * k];
        rr[4 * k + 1] = a[4 * k + 1] + b[4 * k + 1];
        rr[4 * k + 2] = a[4 * k + 2] + b[4 * k + 2];
        rr[4 * k + 3] = a[4 * k + 3] + b[4 * k + 3];
        k = k + 1;
    }
    j = 4 * k;
    while (j < n) {
        rr[j] = a[j] + b[j];
        j = j + 1;
    }
    return 0;
}
