import java.util.Scanner;
public class Main {
    public static void main(String[] args) {
        Scanner in = new Scanner(System.in);
        int count = in.nextInt();
        long acc = 0;
        int j = 0;
        while (j < count) {
            acc = acc + j * 2;
            j = j + 1;
        }
        System.out.println(acc);
    }
}
