/*@ requires n >= 1 && n <= len_a; */
int ArrayMin(int* a, int n) {
    int m = a[0];
    int i = 1;
    while (i < n) {
        if (a[i] < m) {
            m = a[i];
        }
        i = i + 1;
    }
    return m;
}
