/*@
  requires ((n >= 0 && n <= len_a) && n <= len_b) && n <= len_rr;
  assigns rr[0 .. n - 1];
  ensures (n <= 3 && n <= 0 && \result == 0) || (n <= 3 && 0 < n && (\forall integer k; 0 <= k < n ==> rr[k] == a[k] + b[k]) && \result == 0) || (\exists integer s; 4 <= n && n <= 4*s + 3 && 4*s <= n && 0 < s && 0 <= s && n <= 4*s && \result == 0) || (\exists integer s; 4 <= n && n <= 4*s + 3 && 4*s <= n && 0 < s && 0 <= s && 4*s < n && (\forall integer k; 4*s <= k < n ==> rr[k] == a[k] + b[k]) && \result == 0);
*/
int BnAdd(int* a, int* b, int* rr, int n) {
    int k = 0;
    int j = 0;
    /*@
      loop invariant 0 <= k;
      loop assigns k, rr[0 .. 4*k + 3];
    */
    while (k * 4 + 3 < n) {
        rr[4 * k] = a[4 * k] + b[4 * k];
        rr[4 * k + 1] = a[4 * k + 1] + b[4 * k + 1];
        rr[4 * k + 2] = a[4 * k + 2] + b[4 * k + 2];
        rr[4 * k + 3] = a[4 * k + 3] + b[4 * k + 3];
        k = k + 1;
    }
    j = 4 * k;
    /*@
      loop invariant 0 <= j <= n;
      loop assigns j, rr[0 .. len_rr - 1];
    */
    while (j < n) {
        rr[j] = a[j] + b[j];
        j = j + 1;
    }
    return 0;
}
