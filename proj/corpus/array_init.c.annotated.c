/*@
  requires n >= 0 && n <= len_a;
  assigns a[0 .. n - 1];
  ensures (n <= 0 && \result == 0) || (0 < n && (\forall integer k; 0 <= k < n ==> a[k] == 5) && (\forall integer k2; 0 <= k2 < n ==> \old(a[k2]) == 5) && \result == 0);
*/
int ArrayInit(int* a, int n) {
    int i = 0;
    /*@
      loop invariant 0 <= i <= n;
      loop invariant \forall integer k; 0 <= k < i ==> a[k] == 5;
      loop assigns i, a[0 .. n - 1];
    */
    while (i < n) {
        a[i] = 5;
        i = i + 1;
    }
    return 0;
}
