/*@ requires n >= 0 && n <= len_a && n <= len_b; */
int ArrayCopy(int* a, int* b, int n) {
    int i = 0;
    while (i < n) {
        b[i] = a[i];
        i = i + 1;
    }
    return 0;
}
