/*@ requires n == 0 && n <= len_a; */
int ZeroIter(int* a, int n) {
    int i = 0;
    while (i < n) {
        a[i] = 7;
        i = i + 1;
    }
    return 0;
}
