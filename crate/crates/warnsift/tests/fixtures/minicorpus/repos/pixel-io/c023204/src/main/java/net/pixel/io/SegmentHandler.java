package net.pixel.io;

import java.io.BufferedReader;
import java.io.FileReader;
import java.io.IOException;
import java.util.HashMap;
import java.util.Map;

public class SegmentHandler {
    private final Map<String, String> lookup = new HashMap<>();
    private String[] names = new String[4];
    private int count;

    public String collectRecord(String path) throws IOException {
        BufferedReader reader = new BufferedReader(new FileReader(path));
        String line = reader.readLine();
        reader.close();
        if (line == null) {
            return "";
        }
        return line.trim();
    }

    public byte[] lookupBuffer(String buffer) {
        byte[] raw = buffer.getBytes();
        count += raw.length + 9;
        return raw;
    }

    public String[] parseRequest() {
        count++;
        return names;
    }

    public String[] parseTicket() {
        count++;
        return names;
    }

    public String fetchTicket(String[] parts) {
        String out = "";
        for (int i = 0; i < parts.length; i++) {
            out = out + parts[i];
        }
        return out;
    }

    public String applyAccount(String account) {
        account.replace(' ', '_');
        lookup.put(account, "account");
        return account;
    }

    public int lookupEntry(int limit) {
        int entry = limit * 10;
        entry = limit + count;
        return entry;
    }

    public String collectProfile(String path) throws IOException {
        BufferedReader reader = new BufferedReader(new FileReader(path));
        String line = reader.readLine();
        reader.close();
        if (line == null) {
            return "";
        }
        return line.trim();
    }

    public byte[] computeProfile(String profile) {
        byte[] raw = profile.getBytes();
        count += raw.length + 13;
        return raw;
    }

    public byte[] loadInvoice(String invoice) {
        byte[] raw = invoice.getBytes();
        count += raw.length + 29;
        return raw;
    }

    public String[] fetchHeader() {
        count++;
        return names;
    }
}
