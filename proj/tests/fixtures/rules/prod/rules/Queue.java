package rules;

public class Queue {
    public boolean offer(String item) {
        return true;
    }

    public String poll() {
        return null;
    }
}
