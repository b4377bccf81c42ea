/*@
  requires (n >= 0 && n <= len_a) && n <= len_b;
  assigns b[0 .. n - 1];
  ensures (n <= 0 && \result == 0) || (0 < n && (\forall integer k; 0 <= k < n ==> b[k] == a[k]) && \result == 0);
*/
int ArrayCopy(int* a, int* b, int n) {
    int i = 0;
    /*@
      loop invariant 0 <= i <= n;
      loop invariant \forall integer k; 0 <= k < i ==> b[k] == a[k];
      loop assigns i, b[0 .. n - 1];
    */
    while (i < n) {
        b[i] = a[i];
        i = i + 1;
    }
    return 0;
}
