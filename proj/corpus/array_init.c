/*@ requires n >= 0 && n <= len_a; */
int ArrayInit(int* a, int n) {
    int i = 0;
    while (i < n) {
        a[i] = 5;
        i = i + 1;
    }
    return 0;
}
